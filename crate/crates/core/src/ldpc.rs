//! Tanner graph construction: terminated spatially coupled LDPC codes via
//! protograph lifting, generic regular LDPC codes, and membership checks.
//!
//! Graphs are immutable after construction and safely shareable across
//! decoding threads. Adjacency is stored in CSR form for both directions
//! together with the permutation that maps a variable-node-major edge slot to
//! its check-node-major position, which is what the message passing decoders
//! iterate over.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors raised by graph builders and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LdpcError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("insufficient VNs for CN degree")]
    InsufficientVns,
    #[error("n·dv = {edges} not divisible by dc = {dc}")]
    Divisibility { edges: usize, dc: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("could not remove parallel edges after {0} rounds")]
    RepairFailed(usize),
    #[error("adjacency parse error: {0}")]
    Parse(String),
}

/// Parameters of a terminated, protograph-based spatially coupled LDPC code.
///
/// Every variable node has degree `dv`; each spatial position holds
/// `dc/dv` VN types lifted `lifting` times. A VN at position `p` spreads its
/// edges over check-node groups `p..=p+memory`, each edge lifted by an
/// independent random circulant shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScLdpcSpec {
    /// Variable node degree.
    pub dv: u32,
    /// Interior check node degree.
    pub dc: u32,
    /// Number of spatial positions (L).
    pub positions: u32,
    /// Circulant lifting factor (Q).
    pub lifting: u32,
    /// Coupling memory (edges spread over `memory + 1` positions).
    pub memory: u32,
    /// Seed for the lifting shifts.
    pub seed: u64,
}

impl ScLdpcSpec {
    fn validate(&self) -> Result<(), LdpcError> {
        if self.dv == 0 || self.dc == 0 || self.positions == 0 || self.lifting == 0 {
            return Err(LdpcError::InvalidSpec("all parameters must be ≥ 1".into()));
        }
        if self.dc % self.dv != 0 {
            return Err(LdpcError::InvalidSpec(format!(
                "dc = {} not a multiple of dv = {}",
                self.dc, self.dv
            )));
        }
        if self.memory >= self.positions {
            return Err(LdpcError::InvalidSpec(format!(
                "memory {} must be < positions {}",
                self.memory, self.positions
            )));
        }
        // Edges from one VN type into one CN group need distinct circulant
        // shifts; more such edges than the lifting factor cannot be placed
        // without parallel edges.
        let span = self.memory + 1;
        let max_per_group = self.dv.div_ceil(span);
        if max_per_group > self.lifting {
            return Err(LdpcError::InsufficientVns);
        }
        Ok(())
    }

    /// Blocklength n = L·(dc/dv)·Q.
    pub fn n(&self) -> usize {
        self.positions as usize * (self.dc / self.dv) as usize * self.lifting as usize
    }
}

/// Sparse bipartite VN/CN adjacency of an LDPC code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    n_cn: usize,
    cn_ptr: Vec<u32>,
    cn_vn: Vec<u32>,
    vn_ptr: Vec<u32>,
    vn_cn: Vec<u32>,
    /// For VN-major edge slot `i`, the CN-major index of the same edge.
    vn_edge_pos: Vec<u32>,
    label: String,
}

impl TannerGraph {
    /// Builds a graph from per-CN neighbor lists. Lists must not contain
    /// duplicates (parallel edges).
    pub fn from_cn_lists(
        n: usize,
        cn_lists: &[Vec<u32>],
        label: impl Into<String>,
    ) -> Result<Self, LdpcError> {
        let n_cn = cn_lists.len();
        let edges: usize = cn_lists.iter().map(Vec::len).sum();
        let mut cn_ptr = Vec::with_capacity(n_cn + 1);
        let mut cn_vn = Vec::with_capacity(edges);
        cn_ptr.push(0u32);
        for list in cn_lists {
            let mut seen = list.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(LdpcError::InvalidSpec("parallel edge in CN list".into()));
            }
            for &v in list {
                if v as usize >= n {
                    return Err(LdpcError::InvalidSpec(format!("VN index {v} ≥ n = {n}")));
                }
                cn_vn.push(v);
            }
            cn_ptr.push(cn_vn.len() as u32);
        }
        // Reverse map.
        let mut vn_deg = vec![0u32; n];
        for &v in &cn_vn {
            vn_deg[v as usize] += 1;
        }
        let mut vn_ptr = Vec::with_capacity(n + 1);
        vn_ptr.push(0u32);
        for v in 0..n {
            vn_ptr.push(vn_ptr[v] + vn_deg[v]);
        }
        let mut vn_cn = vec![0u32; edges];
        let mut vn_edge_pos = vec![0u32; edges];
        let mut fill = vn_ptr[..n].to_vec();
        for c in 0..n_cn {
            for e in cn_ptr[c]..cn_ptr[c + 1] {
                let v = cn_vn[e as usize] as usize;
                let slot = fill[v] as usize;
                vn_cn[slot] = c as u32;
                vn_edge_pos[slot] = e;
                fill[v] += 1;
            }
        }
        Ok(Self {
            n,
            n_cn,
            cn_ptr,
            cn_vn,
            vn_ptr,
            vn_cn,
            vn_edge_pos,
            label: label.into(),
        })
    }

    /// Number of variable nodes (blocklength).
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check nodes.
    #[inline]
    pub fn n_cn(&self) -> usize {
        self.n_cn
    }

    /// Total number of edges.
    #[inline]
    pub fn edges(&self) -> usize {
        self.cn_vn.len()
    }

    /// Neighbor VNs of check node `c`.
    #[inline]
    pub fn cn_neighbors(&self, c: usize) -> &[u32] {
        &self.cn_vn[self.cn_ptr[c] as usize..self.cn_ptr[c + 1] as usize]
    }

    /// Neighbor CNs of variable node `v`.
    #[inline]
    pub fn vn_neighbors(&self, v: usize) -> &[u32] {
        &self.vn_cn[self.vn_ptr[v] as usize..self.vn_ptr[v + 1] as usize]
    }

    /// CN-major edge indices incident to variable node `v`.
    #[inline]
    pub fn vn_edge_positions(&self, v: usize) -> &[u32] {
        &self.vn_edge_pos[self.vn_ptr[v] as usize..self.vn_ptr[v + 1] as usize]
    }

    /// CSR row pointers of the CN-major edge array.
    #[inline]
    pub fn cn_ptr(&self) -> &[u32] {
        &self.cn_ptr
    }

    /// CN-major edge array (VN index per edge).
    #[inline]
    pub fn cn_vn(&self) -> &[u32] {
        &self.cn_vn
    }

    /// Average variable node degree.
    pub fn avg_vn_degree(&self) -> f64 {
        self.edges() as f64 / self.n as f64
    }

    /// Design rate 1 − n_cn/n.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.n_cn as f64 / self.n as f64
    }

    /// Human-readable tag of the originating spec.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Serializes the graph in the adjacency text format: a header line
    /// `n n_cn` followed by one space-separated CN neighbor list per line.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n, self.n_cn));
        for c in 0..self.n_cn {
            let row: Vec<String> = self
                .cn_neighbors(c)
                .iter()
                .map(|v| v.to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the adjacency text format produced by
    /// [`TannerGraph::to_adjacency_text`].
    pub fn from_adjacency_text(text: &str) -> Result<Self, LdpcError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| LdpcError::Parse("empty input".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LdpcError::Parse("bad header".into()))?;
        let n_cn: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LdpcError::Parse("bad header".into()))?;
        let mut cn_lists = Vec::with_capacity(n_cn);
        for line in lines {
            let row: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
            cn_lists.push(row.map_err(|e| LdpcError::Parse(format!("bad CN row: {e}")))?);
        }
        if cn_lists.len() != n_cn {
            return Err(LdpcError::Parse(format!(
                "expected {n_cn} CN rows, found {}",
                cn_lists.len()
            )));
        }
        Self::from_cn_lists(n, &cn_lists, "imported")
    }
}

/// Builds a terminated spatially coupled LDPC Tanner graph by edge-spreading
/// a regular protograph and lifting each edge with an independent seeded
/// circulant shift.
pub fn build_sc_ldpc(spec: &ScLdpcSpec) -> Result<TannerGraph, LdpcError> {
    spec.validate()?;
    let c = (spec.dc / spec.dv) as usize; // VN types per position
    let q = spec.lifting as usize;
    let span = (spec.memory + 1) as usize;
    let l = spec.positions as usize;
    let n = l * c * q;
    let groups = l + spec.memory as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cn_lists: Vec<Vec<u32>> = vec![Vec::new(); groups * q];
    // (group, shift) pairs already used by the current VN type.
    let mut used: Vec<(usize, u32)> = Vec::with_capacity(spec.dv as usize);
    for p in 0..l {
        for i in 0..c {
            used.clear();
            for e in 0..spec.dv as usize {
                let r = p + e % span;
                let shift = loop {
                    let s = rng.gen_range(0..spec.lifting);
                    if !used.iter().any(|&(ur, us)| ur == r && us == s) {
                        break s;
                    }
                };
                used.push((r, shift));
                for copy in 0..q {
                    let vn = ((p * c + i) * q + copy) as u32;
                    let cn = r * q + (copy + shift as usize) % q;
                    cn_lists[cn].push(vn);
                }
            }
        }
    }
    // Degree-0 CNs (possible only for exotic memory/degree combinations) are
    // dropped from the accounting.
    cn_lists.retain(|list| !list.is_empty());
    let label = format!(
        "sc:dv={},dc={},L={},Q={},mem={},seed={}",
        spec.dv, spec.dc, spec.positions, spec.lifting, spec.memory, spec.seed
    );
    TannerGraph::from_cn_lists(n, &cn_lists, label)
}

/// Builds a (dv, dc)-regular Tanner graph of length `n` with a seeded edge
/// interleaver; parallel edges are repaired by socket swaps.
pub fn build_regular_ldpc(
    dv: u32,
    dc: u32,
    n: usize,
    seed: u64,
) -> Result<TannerGraph, LdpcError> {
    if dv == 0 || dc == 0 || n == 0 {
        return Err(LdpcError::InvalidSpec("all parameters must be ≥ 1".into()));
    }
    let edges = n * dv as usize;
    if edges % dc as usize != 0 {
        return Err(LdpcError::Divisibility {
            edges,
            dc: dc as usize,
        });
    }
    let n_cn = edges / dc as usize;
    if (dc as usize) > n {
        return Err(LdpcError::InsufficientVns);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sockets: Vec<u32> = (0..edges).map(|e| (e / dv as usize) as u32).collect();
    // Fisher–Yates.
    for i in (1..edges).rev() {
        let j = rng.gen_range(0..=i);
        sockets.swap(i, j);
    }
    // Socket k attaches to CN k / dc; repair duplicate (v, c) pairs.
    let max_rounds = 200;
    for round in 0..=max_rounds {
        let mut dup_slots = Vec::new();
        for cn in 0..n_cn {
            let row = &sockets[cn * dc as usize..(cn + 1) * dc as usize];
            for (idx, &v) in row.iter().enumerate() {
                if row[..idx].contains(&v) {
                    dup_slots.push(cn * dc as usize + idx);
                }
            }
        }
        if dup_slots.is_empty() {
            break;
        }
        if round == max_rounds {
            return Err(LdpcError::RepairFailed(max_rounds));
        }
        for slot in dup_slots {
            let other = rng.gen_range(0..edges);
            sockets.swap(slot, other);
        }
    }
    let mut cn_lists: Vec<Vec<u32>> = Vec::with_capacity(n_cn);
    for cn in 0..n_cn {
        cn_lists.push(sockets[cn * dc as usize..(cn + 1) * dc as usize].to_vec());
    }
    let label = format!("ldpc:dv={dv},dc={dc},n={n},seed={seed}");
    TannerGraph::from_cn_lists(n, &cn_lists, label)
}

/// True iff every check node is satisfied.
///
/// A check is satisfied when the bipolar product over its neighborhood is +1,
/// i.e. the number of −1 values (zero bits) is even. For even-degree checks —
/// every graph this workbench simulates — this is identical to the XOR of the
/// neighborhood bits being zero, and the all-zero word is always a codeword.
/// The message passing decoders in [`crate::decoders`] stop on exactly this
/// condition.
pub fn is_codeword(word: &[u8], graph: &TannerGraph) -> Result<bool, LdpcError> {
    if word.len() != graph.n() {
        return Err(LdpcError::LengthMismatch {
            expected: graph.n(),
            got: word.len(),
        });
    }
    for c in 0..graph.n_cn() {
        let mut zeros = 0usize;
        for &v in graph.cn_neighbors(c) {
            zeros += usize::from(word[v as usize] == 0);
        }
        if zeros % 2 != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every check node of the graph has even degree, the regime in
/// which [`is_codeword`] matches plain XOR parity and all-zero-codeword
/// simulation is valid.
pub fn all_cn_degrees_even(graph: &TannerGraph) -> bool {
    (0..graph.n_cn()).all(|c| graph.cn_neighbors(c).len() % 2 == 0)
}

/// Per-iteration decoder data flow `n · d̄_v · q` for `q`-bit messages.
pub fn dataflow_score(graph: &TannerGraph, q: u32) -> f64 {
    assert!(q >= 1, "q must be ≥ 1");
    graph.n() as f64 * graph.avg_vn_degree() * f64::from(q)
}

/// Samples a uniformly random codeword of the graph by Gaussian elimination
/// over GF(2). Intended for symmetry tests and small graphs (cost is
/// O(n_cn·n²/64)); expects even CN degrees so that XOR parity and
/// [`is_codeword`] agree.
pub fn sample_codeword(graph: &TannerGraph, seed: u64) -> Vec<u8> {
    let n = graph.n();
    let words = n.div_ceil(64);
    // H rows as bitsets.
    let mut rows: Vec<Vec<u64>> = (0..graph.n_cn())
        .map(|c| {
            let mut row = vec![0u64; words];
            for &v in graph.cn_neighbors(c) {
                row[v as usize / 64] |= 1 << (v % 64);
            }
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (dst, src) in row.iter_mut().zip(&pivot_row) {
                    *dst ^= src;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let is_pivot = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut word = vec![0u8; n];
    for (v, w) in word.iter_mut().enumerate() {
        if !is_pivot[v] {
            *w = rng.gen_range(0..2u8);
        }
    }
    // Back-substitute pivots from the reduced rows.
    for (r, &pc) in pivot_cols.iter().enumerate() {
        let mut acc = 0u8;
        for col in 0..n {
            if col != pc && rows[r][col / 64] >> (col % 64) & 1 == 1 {
                acc ^= word[col];
            }
        }
        word[pc] = acc;
    }
    debug_assert_eq!(is_codeword(&word, graph), Ok(true));
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_spec() -> ScLdpcSpec {
        ScLdpcSpec {
            dv: 4,
            dc: 24,
            positions: 50,
            lifting: 320,
            memory: 3,
            seed: 1,
        }
    }

    fn fig3_spec() -> ScLdpcSpec {
        ScLdpcSpec {
            dv: 4,
            dc: 40,
            positions: 50,
            lifting: 520,
            memory: 3,
            seed: 1,
        }
    }

    #[test]
    fn paper_configurations() {
        let g = build_sc_ldpc(&fig2_spec()).unwrap();
        assert_eq!(g.n(), 96_000);
        assert_eq!(g.n_cn(), 53 * 320);
        assert!((g.design_rate() - 0.8233).abs() < 5e-4);

        let g = build_sc_ldpc(&fig3_spec()).unwrap();
        assert_eq!(g.n(), 260_000);
        assert_eq!(g.n_cn(), 53 * 520);
        assert!((g.design_rate() - 0.894).abs() < 5e-4);
    }

    #[test]
    fn sc_degree_structure() {
        let spec = ScLdpcSpec {
            dv: 4,
            dc: 24,
            positions: 8,
            lifting: 16,
            memory: 3,
            seed: 3,
        };
        let g = build_sc_ldpc(&spec).unwrap();
        // Every VN has degree exactly dv.
        for v in 0..g.n() {
            assert_eq!(g.vn_neighbors(v).len(), 4);
        }
        // Interior CN groups have degree dc; boundary groups are reduced.
        let q = 16usize;
        for c in 0..g.n_cn() {
            let group = c / q;
            let window = (group.min(7) + 1).min(8 + 3 - group).min(4);
            assert_eq!(g.cn_neighbors(c).len(), window * 6, "group {group}");
        }
        // Degree bookkeeping.
        let vn_sum: usize = (0..g.n()).map(|v| g.vn_neighbors(v).len()).sum();
        let cn_sum: usize = (0..g.n_cn()).map(|c| g.cn_neighbors(c).len()).sum();
        assert_eq!(vn_sum, g.edges());
        assert_eq!(cn_sum, g.edges());
    }

    #[test]
    fn sc_no_parallel_edges_and_deterministic() {
        let spec = ScLdpcSpec {
            dv: 4,
            dc: 8,
            positions: 6,
            lifting: 5,
            memory: 2,
            seed: 9,
        };
        let a = build_sc_ldpc(&spec).unwrap();
        let b = build_sc_ldpc(&spec).unwrap();
        assert_eq!(a, b);
        let other = build_sc_ldpc(&ScLdpcSpec { seed: 10, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn sc_degenerate_rejected() {
        let spec = ScLdpcSpec {
            dv: 4,
            dc: 24,
            positions: 1,
            lifting: 1,
            memory: 0,
            seed: 0,
        };
        assert_eq!(build_sc_ldpc(&spec), Err(LdpcError::InsufficientVns));
    }

    #[test]
    fn sc_invalid_specs_rejected() {
        assert!(build_sc_ldpc(&ScLdpcSpec {
            dc: 25,
            ..fig2_spec()
        })
        .is_err());
        assert!(build_sc_ldpc(&ScLdpcSpec {
            memory: 50,
            ..fig2_spec()
        })
        .is_err());
    }

    #[test]
    fn regular_builder() {
        let g = build_regular_ldpc(3, 6, 12, 7).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.n_cn(), 6);
        for v in 0..12 {
            assert_eq!(g.vn_neighbors(v).len(), 3);
        }
        for c in 0..6 {
            let mut ns = g.cn_neighbors(c).to_vec();
            ns.sort_unstable();
            ns.dedup();
            assert_eq!(ns.len(), 6, "parallel edge at CN {c}");
        }
        assert_eq!(g, build_regular_ldpc(3, 6, 12, 7).unwrap());
        assert!(matches!(
            build_regular_ldpc(3, 7, 12, 0),
            Err(LdpcError::Divisibility { .. })
        ));
    }

    #[test]
    fn codeword_checks() {
        let g = build_regular_ldpc(3, 6, 24, 5).unwrap();
        let zero = vec![0u8; 24];
        assert_eq!(is_codeword(&zero, &g), Ok(true));
        let mut one_flip = zero.clone();
        one_flip[7] = 1;
        assert_eq!(is_codeword(&one_flip, &g), Ok(false));
        assert!(is_codeword(&zero[..23], &g).is_err());
    }

    #[test]
    fn sampled_codewords_are_codewords() {
        let g = build_regular_ldpc(3, 6, 60, 2).unwrap();
        for seed in 0..5 {
            let w = sample_codeword(&g, seed);
            assert_eq!(is_codeword(&w, &g), Ok(true));
        }
        // Not always the zero codeword.
        assert!((0..5).any(|s| sample_codeword(&g, s).iter().any(|&b| b == 1)));
    }

    #[test]
    fn dataflow_scores() {
        let g = build_sc_ldpc(&fig2_spec()).unwrap();
        assert_eq!(dataflow_score(&g, 1), 384_000.0);
        assert_eq!(dataflow_score(&g, 2), 768_000.0);
        assert_eq!(dataflow_score(&g, 4), 4.0 * 384_000.0);
    }

    #[test]
    fn adjacency_roundtrip() {
        let g = build_regular_ldpc(3, 6, 18, 4).unwrap();
        let text = g.to_adjacency_text();
        let parsed = TannerGraph::from_adjacency_text(&text).unwrap();
        assert_eq!(g.n(), parsed.n());
        assert_eq!(g.n_cn(), parsed.n_cn());
        for c in 0..g.n_cn() {
            assert_eq!(g.cn_neighbors(c), parsed.cn_neighbors(c));
        }
        assert!(TannerGraph::from_adjacency_text("").is_err());
        assert!(TannerGraph::from_adjacency_text("4 2\n0 1\n").is_err());
    }
}
