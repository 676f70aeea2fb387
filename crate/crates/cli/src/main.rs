fn main() {
    println!("fecsim");
}
