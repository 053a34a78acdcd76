//! Problem instances, file formats, seeded generators, and brute-force
//! reference solvers.
//!
//! Three problem shapes live here: set systems over a universe of at most 63
//! elements (used for both cover and exact-partition questions), simple
//! graphs (chromatic-number decision), and weighted GF(2) linear systems.
//! Every randomized component in the crate draws its randomness through
//! [`RandomSeed`], so identical seeds and derivation paths reproduce
//! identical behavior bit for bit.
//!
//! The `brute_force_*` functions are small exhaustive solvers with hard size
//! guards. They exist to pin down ground truth for tests and spot checks,
//! not to be fast.

use crate::bits::universe_mask;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest universe representable as a single `u64` bitmask with headroom.
pub const MAX_UNIVERSE: usize = 63;

/// Default guards for the exhaustive set-system solvers.
pub const BRUTE_FORCE_MAX_N: usize = 30;
pub const BRUTE_FORCE_MAX_M: usize = 24;
/// Default guard for the exhaustive chromatic-number solver.
pub const BRUTE_FORCE_CHROMATIC_MAX_N: usize = 10;
/// Guard for exact k-colorability (used as a solver fallback, so roomier).
pub const K_COLORABLE_MAX_N: usize = 20;
/// Default guard for the exhaustive linear-system solver.
pub const BRUTE_FORCE_LINSAT_MAX_M: usize = 20;

/// Whether an operation treats a set system as a cover question
/// (chosen sets may overlap; size at most `s`) or an exact-partition
/// question (chosen sets are disjoint, exhaustive, exactly `s` of them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemMode {
    Cover,
    Partition,
}

// ---------------------------------------------------------------------------
// Set-system instances
// ---------------------------------------------------------------------------

/// A set system over universe `{0, .., n-1}` together with a target
/// solution size `s`.
///
/// Sets are element bitmasks. Empty sets are rejected at construction
/// unless the instance is explicitly flagged as allowing them; several
/// reductions emit padded instances that rely on that flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystemInstance {
    n: usize,
    sets: Vec<u64>,
    s: usize,
    allows_empty: bool,
}

impl SetSystemInstance {
    /// Builds an instance, rejecting empty sets and out-of-range elements.
    pub fn new(n: usize, sets: Vec<u64>, s: usize) -> Result<Self> {
        Self::build(n, sets, s, false)
    }

    /// Builds an instance in which empty sets are permitted members.
    pub fn new_allowing_empty(n: usize, sets: Vec<u64>, s: usize) -> Result<Self> {
        Self::build(n, sets, s, true)
    }

    fn build(n: usize, sets: Vec<u64>, s: usize, allows_empty: bool) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return Err(Error::InvalidInstance(format!(
                "universe size {n} exceeds the cap of {MAX_UNIVERSE}"
            )));
        }
        let umask = universe_mask(n);
        for (i, &set) in sets.iter().enumerate() {
            if set & !umask != 0 {
                return Err(Error::InvalidInstance(format!(
                    "set {i} contains elements outside the universe"
                )));
            }
            if set == 0 && !allows_empty {
                return Err(Error::InvalidInstance(format!(
                    "set {i} is empty but the instance does not allow empty sets"
                )));
            }
        }
        Ok(Self {
            n,
            sets,
            s,
            allows_empty,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sets in the family.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Target solution size.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> u64 {
        self.sets[i]
    }

    pub fn set_size(&self, i: usize) -> usize {
        self.sets[i].count_ones() as usize
    }

    pub fn allows_empty(&self) -> bool {
        self.allows_empty
    }

    pub fn has_empty_sets(&self) -> bool {
        self.sets.contains(&0)
    }

    /// Bitmask of the full universe.
    pub fn universe_mask(&self) -> u64 {
        universe_mask(self.n)
    }

    /// Same family, different target size.
    pub fn with_target(&self, s: usize) -> Self {
        Self { s, ..self.clone() }
    }

    /// Sum of all set sizes (the number of incidence edges).
    pub fn total_set_size(&self) -> usize {
        self.sets.iter().map(|s| s.count_ones() as usize).sum()
    }
}

/// Parses the plain-text set-system format:
///
/// ```text
/// p setsystem <n> <m> <s>
/// <space-separated 0-based element indices of set 1>
/// ...                                         (m lines; empty line = empty set)
/// ```
pub fn parse_set_system(text: &str) -> Result<SetSystemInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines
        .first()
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "p" || tokens[1] != "setsystem" {
        return Err(Error::parse(1, "expected header `p setsystem <n> <m> <s>`"));
    }
    let n: usize = tokens[2]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid universe size `{}`", tokens[2])))?;
    let m: usize = tokens[3]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid set count `{}`", tokens[3])))?;
    let s: usize = tokens[4]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid target size `{}`", tokens[4])))?;
    if n > MAX_UNIVERSE {
        return Err(Error::parse(
            1,
            format!("universe size {n} exceeds the cap of {MAX_UNIVERSE}"),
        ));
    }
    let mut sets = Vec::with_capacity(m);
    for i in 0..m {
        let line_no = i + 2;
        let line = lines
            .get(i + 1)
            .ok_or_else(|| Error::parse(line_no, format!("expected {m} set lines, found {i}")))?;
        let mut mask = 0u64;
        for tok in line.split_whitespace() {
            let idx: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid element index `{tok}`")))?;
            if idx >= n {
                return Err(Error::parse(
                    line_no,
                    format!("element index {idx} >= n={n}"),
                ));
            }
            mask |= 1u64 << idx;
        }
        sets.push(mask);
    }
    for (extra, line) in lines.iter().enumerate().skip(m + 1) {
        if !line.trim().is_empty() {
            return Err(Error::parse(
                extra + 1,
                format!("unexpected content after {m} set lines"),
            ));
        }
    }
    let allows_empty = sets.contains(&0);
    SetSystemInstance::build(n, sets, s, allows_empty)
}

/// Serializes an instance in the format accepted by [`parse_set_system`].
pub fn serialize_set_system(inst: &SetSystemInstance) -> String {
    let mut out = format!("p setsystem {} {} {}\n", inst.n(), inst.m(), inst.s());
    for &set in inst.sets() {
        let elems: Vec<String> = (0..inst.n())
            .filter(|&e| set & (1u64 << e) != 0)
            .map(|e| e.to_string())
            .collect();
        out.push_str(&elems.join(" "));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// A simple undirected graph on at most 63 vertices, stored as adjacency
/// bitmasks. No self-loops; edges are symmetric by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return Err(Error::InvalidInstance(format!(
                "vertex count {n} exceeds the cap of {MAX_UNIVERSE}"
            )));
        }
        Ok(Self { n, adj: vec![0; n] })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInstance(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1u64 << v) != 0
    }

    /// Neighbor bitmask of vertex `v`.
    pub fn adj(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// True when no two vertices of `mask` are adjacent.
    pub fn is_independent(&self, mask: u64) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.adj[v] & mask != 0 {
                return false;
            }
        }
        true
    }

    pub fn vertex_mask(&self) -> u64 {
        universe_mask(self.n)
    }
}

/// Parses the DIMACS-like graph format:
///
/// ```text
/// p edge <n> <m>
/// e <u> <v>        (m lines, 1-based endpoints)
/// ```
///
/// `c ...` comment lines and blank lines are ignored wherever they appear;
/// error messages report original file line numbers.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| {
            let body = line.trim_start();
            !body.is_empty() && !body.starts_with('c')
        })
        .collect();
    let eof_line = text.lines().count() + 1;
    let (header_no, header) = lines
        .first()
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "edge" {
        return Err(Error::parse(*header_no, "expected header `p edge <n> <m>`"));
    }
    let n: usize = tokens[2]
        .parse()
        .map_err(|_| Error::parse(*header_no, format!("invalid vertex count `{}`", tokens[2])))?;
    let m: usize = tokens[3]
        .parse()
        .map_err(|_| Error::parse(*header_no, format!("invalid edge count `{}`", tokens[3])))?;
    let mut g = SimpleGraph::new(n).map_err(|e| Error::parse(*header_no, e.to_string()))?;
    for i in 0..m {
        let (line_no, line) = lines
            .get(i + 1)
            .ok_or_else(|| Error::parse(eof_line, format!("expected {m} edge lines, found {i}")))?;
        let line_no = *line_no;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "e" {
            return Err(Error::parse(line_no, "expected edge line `e <u> <v>`"));
        }
        let u: usize = toks[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid endpoint `{}`", toks[1])))?;
        let v: usize = toks[2]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid endpoint `{}`", toks[2])))?;
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::parse(
                line_no,
                format!("endpoint out of range in edge ({u}, {v}); vertices are 1..={n}"),
            ));
        }
        g.add_edge(u - 1, v - 1)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    if let Some((line_no, _)) = lines.get(m + 1) {
        return Err(Error::parse(
            *line_no,
            format!("unexpected content after {m} edge lines"),
        ));
    }
    Ok(g)
}

/// Serializes a graph in the format accepted by [`parse_graph`].
pub fn serialize_graph(g: &SimpleGraph) -> String {
    let mut edges = Vec::new();
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if g.has_edge(u, v) {
                edges.push((u + 1, v + 1));
            }
        }
    }
    let mut out = format!("p edge {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// Weighted GF(2) linear systems
// ---------------------------------------------------------------------------

/// Find `x ∈ {0,1}^m` with `A·x ≡ b (mod 2)` and `ω·x ≤ t`.
///
/// Columns are row bitmasks (bit `i` of `columns[j]` is row `i` of column
/// `j`), so a chosen-column XOR is a single word operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSatInstance {
    n_rows: usize,
    columns: Vec<u64>,
    b: u64,
    weights: Vec<u64>,
    t: u64,
}

impl LinSatInstance {
    pub fn new(
        n_rows: usize,
        columns: Vec<u64>,
        b: u64,
        weights: Vec<u64>,
        t: u64,
    ) -> Result<Self> {
        if n_rows > MAX_UNIVERSE {
            return Err(Error::InvalidInstance(format!(
                "row count {n_rows} exceeds the cap of {MAX_UNIVERSE}"
            )));
        }
        if weights.len() != columns.len() {
            return Err(Error::InvalidInstance(format!(
                "{} columns but {} weights",
                columns.len(),
                weights.len()
            )));
        }
        let rmask = universe_mask(n_rows);
        if b & !rmask != 0 {
            return Err(Error::InvalidInstance(
                "target vector has bits outside the row range".into(),
            ));
        }
        for (j, &col) in columns.iter().enumerate() {
            if col & !rmask != 0 {
                return Err(Error::InvalidInstance(format!(
                    "column {j} has bits outside the row range"
                )));
            }
        }
        Ok(Self {
            n_rows,
            columns,
            b,
            weights,
            t,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn m_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> u64 {
        self.columns[j]
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Same system, different cost budget.
    pub fn with_budget(&self, t: u64) -> Self {
        Self { t, ..self.clone() }
    }

    /// XOR of the columns selected by indices.
    pub fn image_of(&self, chosen: &[usize]) -> u64 {
        chosen.iter().fold(0u64, |acc, &j| acc ^ self.columns[j])
    }

    /// Total weight of the columns selected by indices.
    pub fn cost_of(&self, chosen: &[usize]) -> u128 {
        chosen.iter().map(|&j| self.weights[j] as u128).sum()
    }
}

fn parse_bitstring(line: &str, n_rows: usize, line_no: usize) -> Result<u64> {
    let trimmed = line.trim();
    if trimmed.len() != n_rows {
        return Err(Error::parse(
            line_no,
            format!(
                "expected a {n_rows}-character bitstring, found {} characters",
                trimmed.len()
            ),
        ));
    }
    let mut mask = 0u64;
    for (i, ch) in trimmed.chars().enumerate() {
        match ch {
            '1' => mask |= 1u64 << i,
            '0' => {}
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("invalid bit character `{other}`"),
                ))
            }
        }
    }
    Ok(mask)
}

fn bitstring(mask: u64, n_rows: usize) -> String {
    (0..n_rows)
        .map(|i| if mask & (1u64 << i) != 0 { '1' } else { '0' })
        .collect()
}

/// Parses the plain-text linear-system format:
///
/// ```text
/// p linsat <n_rows> <m_cols> <t>
/// <column bitstring>      (m_cols lines; first character = row 0)
/// <target bitstring b>
/// <m_cols space-separated weights>
/// ```
pub fn parse_linsat(text: &str) -> Result<LinSatInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines
        .first()
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "p" || tokens[1] != "linsat" {
        return Err(Error::parse(
            1,
            "expected header `p linsat <n_rows> <m_cols> <t>`",
        ));
    }
    let n_rows: usize = tokens[2]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid row count `{}`", tokens[2])))?;
    let m_cols: usize = tokens[3]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid column count `{}`", tokens[3])))?;
    let t: u64 = tokens[4]
        .parse()
        .map_err(|_| Error::parse(1, format!("invalid budget `{}`", tokens[4])))?;
    let mut columns = Vec::with_capacity(m_cols);
    for j in 0..m_cols {
        let line_no = j + 2;
        let line = lines.get(j + 1).ok_or_else(|| {
            Error::parse(
                line_no,
                format!("expected {m_cols} column lines, found {j}"),
            )
        })?;
        columns.push(parse_bitstring(line, n_rows, line_no)?);
    }
    let b_line_no = m_cols + 2;
    let b_line = lines
        .get(m_cols + 1)
        .ok_or_else(|| Error::parse(b_line_no, "missing target bitstring"))?;
    let b = parse_bitstring(b_line, n_rows, b_line_no)?;
    let w_line_no = m_cols + 3;
    let w_line = lines
        .get(m_cols + 2)
        .ok_or_else(|| Error::parse(w_line_no, "missing weights line"))?;
    let weights: Vec<u64> = w_line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::parse(w_line_no, format!("invalid weight `{tok}`")))
        })
        .collect::<Result<_>>()?;
    if weights.len() != m_cols {
        return Err(Error::parse(
            w_line_no,
            format!("expected {m_cols} weights, found {}", weights.len()),
        ));
    }
    for (extra, line) in lines.iter().enumerate().skip(m_cols + 3) {
        if !line.trim().is_empty() {
            return Err(Error::parse(
                extra + 1,
                "unexpected content after the weights line".to_string(),
            ));
        }
    }
    LinSatInstance::new(n_rows, columns, b, weights, t)
}

/// Serializes a system in the format accepted by [`parse_linsat`].
pub fn serialize_linsat(inst: &LinSatInstance) -> String {
    let mut out = format!(
        "p linsat {} {} {}\n",
        inst.n_rows(),
        inst.m_cols(),
        inst.t()
    );
    for &col in inst.columns() {
        out.push_str(&bitstring(col, inst.n_rows()));
        out.push('\n');
    }
    out.push_str(&bitstring(inst.b(), inst.n_rows()));
    out.push('\n');
    let ws: Vec<String> = inst.weights().iter().map(|w| w.to_string()).collect();
    out.push_str(&ws.join(" "));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Seeds and verdicts
// ---------------------------------------------------------------------------

/// A root seed plus a derivation path. Children derived along distinct
/// paths get statistically independent, fully reproducible streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSeed {
    seed: u64,
    path: Vec<u64>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomSeed {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            path: Vec::new(),
        }
    }

    /// Child seed extended by one path component.
    pub fn derive(&self, idx: u64) -> Self {
        let mut path = self.path.clone();
        path.push(idx);
        Self {
            seed: self.seed,
            path,
        }
    }

    pub fn root(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    fn mixed_state(&self) -> u64 {
        let mut state = splitmix64(self.seed);
        for &p in &self.path {
            state = splitmix64(state ^ splitmix64(p ^ 0xa076_1d64_78bd_642f));
        }
        state
    }

    /// Deterministic RNG for this seed + path.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.mixed_state())
    }
}

/// A solution witness attached to a YES verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Indices into an explicit set family.
    SetIndices(Vec<usize>),
    /// Set bitmasks; used by oracle-backed solvers that have no index space.
    SetMasks(Vec<u64>),
    /// Chosen column indices of a linear system.
    Columns(Vec<usize>),
}

/// Decision answer with a mandatory witness on YES.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Certificate),
    No,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Yes(c) => Some(c),
            Verdict::No => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Certificate checking
// ---------------------------------------------------------------------------

/// True when `chosen` indexes a family subset of size at most `inst.s()`
/// whose union is the whole universe.
pub fn verify_cover(inst: &SetSystemInstance, chosen: &[usize]) -> bool {
    if chosen.len() > inst.s() {
        return false;
    }
    let mut seen = vec![false; inst.m()];
    let mut union = 0u64;
    for &i in chosen {
        if i >= inst.m() || seen[i] {
            return false;
        }
        seen[i] = true;
        union |= inst.set(i);
    }
    union == inst.universe_mask()
}

/// True when `chosen` indexes exactly `inst.s()` pairwise-disjoint sets
/// whose union is the whole universe.
pub fn verify_partition(inst: &SetSystemInstance, chosen: &[usize]) -> bool {
    if chosen.len() != inst.s() {
        return false;
    }
    let mut seen = vec![false; inst.m()];
    let mut union = 0u64;
    let mut total = 0usize;
    for &i in chosen {
        if i >= inst.m() || seen[i] {
            return false;
        }
        seen[i] = true;
        union |= inst.set(i);
        total += inst.set_size(i);
    }
    union == inst.universe_mask() && total == inst.n()
}

/// True when `parts` are exactly `s` pairwise-disjoint masks covering the
/// `n`-element universe.
pub fn verify_mask_partition(n: usize, parts: &[u64], s: usize) -> bool {
    if parts.len() != s {
        return false;
    }
    let mut union = 0u64;
    let mut total = 0u32;
    for &p in parts {
        if p & !universe_mask(n) != 0 {
            return false;
        }
        union |= p;
        total += p.count_ones();
    }
    union == universe_mask(n) && total as usize == n
}

/// True when `chosen` columns XOR to the target and fit the budget.
pub fn verify_linsat(inst: &LinSatInstance, chosen: &[usize]) -> bool {
    let mut seen = vec![false; inst.m_cols()];
    for &j in chosen {
        if j >= inst.m_cols() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    inst.image_of(chosen) == inst.b() && inst.cost_of(chosen) <= inst.t() as u128
}

/// True when `classes` are at most `s` disjoint independent sets covering
/// all vertices of `g`.
pub fn verify_coloring(g: &SimpleGraph, classes: &[u64], s: usize) -> bool {
    if classes.len() > s {
        return false;
    }
    let mut union = 0u64;
    let mut total = 0u32;
    for &c in classes {
        if c & !g.vertex_mask() != 0 || !g.is_independent(c) {
            return false;
        }
        union |= c;
        total += c.count_ones();
    }
    union == g.vertex_mask() && total as usize == g.n()
}

// ---------------------------------------------------------------------------
// Brute-force reference solvers
// ---------------------------------------------------------------------------

fn indices_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

/// Exhaustive set-cover decision over all subfamilies; the certificate is a
/// minimum-cardinality cover. Guarded by the default size limits.
pub fn brute_force_set_cover(inst: &SetSystemInstance) -> Result<Verdict> {
    brute_force_set_cover_with_limits(inst, BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_M)
}

/// Exhaustive set cover with caller-chosen size limits.
pub fn brute_force_set_cover_with_limits(
    inst: &SetSystemInstance,
    max_n: usize,
    max_m: usize,
) -> Result<Verdict> {
    if inst.n() > max_n || inst.m() > max_m {
        return Err(Error::GuardExceeded(format!(
            "brute-force cover limited to n <= {max_n}, m <= {max_m}; got n={}, m={}",
            inst.n(),
            inst.m()
        )));
    }
    let universe = inst.universe_mask();
    let mut best: Option<(u32, u64)> = None;
    for choice in 0u64..(1u64 << inst.m()) {
        let size = choice.count_ones();
        if let Some((bs, _)) = best {
            if size >= bs {
                continue;
            }
        }
        let mut union = 0u64;
        let mut rest = choice;
        while rest != 0 {
            union |= inst.set(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        if union == universe {
            best = Some((size, choice));
        }
    }
    match best {
        Some((size, choice)) if size as usize <= inst.s() => {
            Ok(Verdict::Yes(Certificate::SetIndices(indices_of(choice))))
        }
        _ => Ok(Verdict::No),
    }
}

/// Exhaustive exact-partition decision: some subfamily of exactly `s`
/// pairwise-disjoint sets unions to the universe.
pub fn brute_force_set_partition(inst: &SetSystemInstance) -> Result<Verdict> {
    brute_force_set_partition_with_limits(inst, BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_M)
}

/// Exhaustive exact partition with caller-chosen size limits.
pub fn brute_force_set_partition_with_limits(
    inst: &SetSystemInstance,
    max_n: usize,
    max_m: usize,
) -> Result<Verdict> {
    if inst.n() > max_n || inst.m() > max_m {
        return Err(Error::GuardExceeded(format!(
            "brute-force partition limited to n <= {max_n}, m <= {max_m}; got n={}, m={}",
            inst.n(),
            inst.m()
        )));
    }
    let universe = inst.universe_mask();
    let s = inst.s();
    for choice in 0u64..(1u64 << inst.m()) {
        if choice.count_ones() as usize != s {
            continue;
        }
        let mut union = 0u64;
        let mut total = 0usize;
        let mut rest = choice;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            union |= inst.set(i);
            total += inst.set_size(i);
        }
        // Union equal to U plus sizes summing to n forces pairwise disjointness.
        if union == universe && total == inst.n() {
            return Ok(Verdict::Yes(Certificate::SetIndices(indices_of(choice))));
        }
    }
    Ok(Verdict::No)
}

/// Exact k-colorability by symmetry-pruned backtracking. Returns the color
/// classes (empty classes dropped) when colorable.
pub fn k_coloring_classes(g: &SimpleGraph, k: usize) -> Result<Option<Vec<u64>>> {
    if g.n() > K_COLORABLE_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "exact coloring limited to n <= {K_COLORABLE_MAX_N}; got n={}",
            g.n()
        )));
    }
    if g.n() == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    let mut classes = vec![0u64; k.min(g.n())];
    if color_rec(g, &mut classes, 0, 0) {
        classes.retain(|&c| c != 0);
        Ok(Some(classes))
    } else {
        Ok(None)
    }
}

fn color_rec(g: &SimpleGraph, classes: &mut Vec<u64>, v: usize, used: usize) -> bool {
    if v == g.n() {
        return true;
    }
    // Trying at most one fresh color per level kills color-permutation symmetry.
    let tryable = (used + 1).min(classes.len());
    for c in 0..tryable {
        if g.adj(v) & classes[c] == 0 {
            classes[c] |= 1u64 << v;
            let next_used = used.max(c + 1);
            if color_rec(g, classes, v + 1, next_used) {
                return true;
            }
            classes[c] &= !(1u64 << v);
        }
    }
    false
}

/// True when `g` admits a proper coloring with at most `k` colors.
pub fn graph_k_colorable(g: &SimpleGraph, k: usize) -> Result<bool> {
    Ok(k_coloring_classes(g, k)?.is_some())
}

/// Exact chromatic number by increasing-k search. Guarded small.
pub fn brute_force_chromatic(g: &SimpleGraph) -> Result<usize> {
    if g.n() > BRUTE_FORCE_CHROMATIC_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "brute-force chromatic limited to n <= {BRUTE_FORCE_CHROMATIC_MAX_N}; got n={}",
            g.n()
        )));
    }
    if g.n() == 0 {
        return Ok(0);
    }
    for k in 1..=g.n() {
        if graph_k_colorable(g, k)? {
            return Ok(k);
        }
    }
    unreachable!("every graph is n-colorable")
}

/// Exhaustive linear-system decision; the certificate is a minimum-cost
/// solution.
pub fn brute_force_linsat(inst: &LinSatInstance) -> Result<Verdict> {
    brute_force_linsat_with_limits(inst, BRUTE_FORCE_LINSAT_MAX_M)
}

/// Exhaustive linear-system decision with a caller-chosen column limit.
pub fn brute_force_linsat_with_limits(inst: &LinSatInstance, max_m: usize) -> Result<Verdict> {
    if inst.m_cols() > max_m {
        return Err(Error::GuardExceeded(format!(
            "brute-force linear solve limited to m <= {max_m}; got m={}",
            inst.m_cols()
        )));
    }
    let mut best: Option<(u128, u64)> = None;
    for x in 0u64..(1u64 << inst.m_cols()) {
        let mut image = 0u64;
        let mut cost = 0u128;
        let mut rest = x;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            image ^= inst.column(j);
            cost += inst.weights()[j] as u128;
        }
        if image == inst.b() && cost <= inst.t() as u128 {
            match best {
                Some((bc, _)) if bc <= cost => {}
                _ => best = Some((cost, x)),
            }
        }
    }
    match best {
        Some((_, x)) => Ok(Verdict::Yes(Certificate::Columns(indices_of(x)))),
        None => Ok(Verdict::No),
    }
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

/// Parameters for the seeded set-system generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n: usize,
    pub m: usize,
    /// Upper bound on every generated set's size.
    pub max_set_size: usize,
    /// When true, a disjoint partition of the universe into `s` blocks is
    /// planted among the `m` sets, guaranteeing a YES instance at size `s`.
    pub planted: bool,
    pub s: usize,
}

/// Generates a random set system; deterministic in `(params, seed)`.
pub fn generate_random_instance(
    params: &GeneratorParams,
    seed: &RandomSeed,
) -> Result<SetSystemInstance> {
    let GeneratorParams {
        n,
        m,
        max_set_size: r,
        planted,
        s,
    } = *params;
    if n > MAX_UNIVERSE {
        return Err(Error::InfeasibleParams(format!(
            "universe size {n} exceeds the cap of {MAX_UNIVERSE}"
        )));
    }
    if m > 0 && n > 0 && r == 0 {
        return Err(Error::InfeasibleParams(
            "max_set_size = 0 cannot produce nonempty sets".into(),
        ));
    }
    if m > 0 && n == 0 {
        return Err(Error::InfeasibleParams(
            "cannot place nonempty sets over an empty universe".into(),
        ));
    }
    let mut rng = seed.rng();
    let mut sets: Vec<Option<u64>> = vec![None; m];

    if planted && n > 0 {
        if s == 0 || s > n || s * r < n || m < s {
            return Err(Error::InfeasibleParams(format!(
                "cannot plant {s} disjoint blocks of size <= {r} covering {n} elements among {m} sets"
            )));
        }
        // Block sizes: start at 1 each, then spread the remaining elements
        // uniformly over blocks that still have room.
        let mut sizes = vec![1usize; s];
        let mut remaining = n - s;
        while remaining > 0 {
            let open: Vec<usize> = (0..s).filter(|&i| sizes[i] < r).collect();
            let pick = open[rng.random_range(0..open.len())];
            sizes[pick] += 1;
            remaining -= 1;
        }
        let mut elems: Vec<usize> = (0..n).collect();
        elems.shuffle(&mut rng);
        let mut slots: Vec<usize> = (0..m).collect();
        slots.shuffle(&mut rng);
        let mut at = 0usize;
        for (block, &size) in sizes.iter().enumerate() {
            let mask = elems[at..at + size]
                .iter()
                .fold(0u64, |acc, &e| acc | (1u64 << e));
            at += size;
            sets[slots[block]] = Some(mask);
        }
    } else if planted && s != 0 {
        return Err(Error::InfeasibleParams(
            "cannot plant a nonzero-size partition of an empty universe".into(),
        ));
    }

    for slot in sets.iter_mut() {
        if slot.is_none() {
            let size = rng.random_range(1..=r.min(n));
            let mut elems: Vec<usize> = (0..n).collect();
            let (chosen, _) = elems.partial_shuffle(&mut rng, size);
            let mask = chosen.iter().fold(0u64, |acc, &e| acc | (1u64 << e));
            *slot = Some(mask);
        }
    }

    let sets: Vec<u64> = sets.into_iter().map(|o| o.unwrap()).collect();
    SetSystemInstance::new(n, sets, s)
}

/// Erdős–Rényi-style random graph; each pair becomes an edge independently
/// with probability `edge_prob`. Deterministic in `(n, edge_prob, seed)`.
pub fn generate_random_graph(n: usize, edge_prob: f64, seed: &RandomSeed) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::new(n)?;
    let mut rng = seed.rng();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < edge_prob {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Random weighted linear system. With `planted` a random solution is chosen
/// and the budget set to its cost, guaranteeing a YES instance; otherwise the
/// target and budget are drawn uniformly.
pub fn generate_random_linsat(
    n_rows: usize,
    m_cols: usize,
    max_weight: u64,
    planted: bool,
    seed: &RandomSeed,
) -> Result<LinSatInstance> {
    if n_rows > MAX_UNIVERSE || m_cols > MAX_UNIVERSE {
        return Err(Error::InfeasibleParams(format!(
            "linear-system generator limited to {MAX_UNIVERSE} rows/columns; got {n_rows}x{m_cols}"
        )));
    }
    if max_weight == 0 {
        return Err(Error::InfeasibleParams(
            "max_weight must be positive".into(),
        ));
    }
    let mut rng = seed.rng();
    let rmask = universe_mask(n_rows);
    let columns: Vec<u64> = (0..m_cols).map(|_| rng.random::<u64>() & rmask).collect();
    let weights: Vec<u64> = (0..m_cols)
        .map(|_| rng.random_range(1..=max_weight))
        .collect();
    let (b, t) = if planted && m_cols > 0 {
        let x = rng.random_range(1..(1u64 << m_cols));
        let mut image = 0u64;
        let mut cost = 0u64;
        let mut rest = x;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            image ^= columns[j];
            cost += weights[j];
        }
        (image, cost)
    } else {
        let total: u64 = weights.iter().sum();
        (
            rng.random::<u64>() & rmask,
            rng.random_range(0..=total.max(1)),
        )
    };
    LinSatInstance::new(n_rows, columns, b, weights, t)
}

/// Convenience: materialize set masks from slices of element indices.
pub fn masks_from_elements(sets: &[&[usize]]) -> Vec<u64> {
    sets.iter()
        .map(|elems| elems.iter().fold(0u64, |acc, &e| acc | (1u64 << e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, sets: &[&[usize]], s: usize) -> SetSystemInstance {
        SetSystemInstance::new(n, masks_from_elements(sets), s).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_instances() {
        assert!(SetSystemInstance::new(2, vec![0b100], 1).is_err()); // out of range
        assert!(SetSystemInstance::new(2, vec![0], 1).is_err()); // empty set
        assert!(SetSystemInstance::new_allowing_empty(2, vec![0], 1).is_ok());
        assert!(SetSystemInstance::new(64, vec![], 0).is_err()); // universe too big
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        let text = "p setsystem 3 3 2\n0 1\n2\n0 2\n";
        let parsed = parse_set_system(text).unwrap();
        assert_eq!(parsed.n(), 3);
        assert_eq!(parsed.m(), 3);
        assert_eq!(parsed.s(), 2);
        assert_eq!(parsed.sets(), &[0b011, 0b100, 0b101]);
        assert_eq!(serialize_set_system(&parsed), text);
        let again = parse_set_system(&serialize_set_system(&parsed)).unwrap();
        assert_eq!(again, parsed);
    }

    #[test]
    fn parse_round_trips_empty_sets() {
        let text = "p setsystem 2 2 1\n0 1\n\n";
        let parsed = parse_set_system(text).unwrap();
        assert!(parsed.allows_empty());
        assert_eq!(parsed.sets(), &[0b11, 0]);
        assert_eq!(serialize_set_system(&parsed), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_set_system("p setsystem 2 1 1\n5\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "element index 5 >= n=2".into()
            }
        );
        let err = parse_set_system("p cover 2 1 1\n0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_set_system("p setsystem 2 2 1\n0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_set_system("p setsystem 2 1 1\n0\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn graph_round_trip_and_errors() {
        let text = "p edge 4 3\ne 1 2\ne 2 3\ne 1 4\n";
        let g = parse_graph(text).unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 3));
        assert_eq!(g.edge_count(), 3);
        // Serialization is canonical (sorted edges) and re-parses to the same graph.
        assert_eq!(serialize_graph(&g), "p edge 4 3\ne 1 2\ne 1 4\ne 2 3\n");
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
        assert!(parse_graph("p edge 2 1\ne 1 1\n").is_err()); // self-loop
        assert!(parse_graph("p edge 2 1\ne 1 3\n").is_err()); // out of range
        assert!(matches!(
            parse_graph("p edge 2 2\ne 1 2\n").unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn graph_parser_skips_comments_and_blank_lines() {
        let commented = "c a triangle\nc with comments sprinkled in\np edge 3 3\n\ne 1 2\nc midway\ne 2 3\ne 1 3\n\n";
        let g = parse_graph(commented).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap());
        // A file of only comments still lacks a header.
        assert!(parse_graph("c nothing here\n").is_err());
        // Errors report the original file's line numbers, comments included.
        assert!(matches!(
            parse_graph("c comment\np edge 2 1\nc another\nx 1 2\n").unwrap_err(),
            Error::Parse { line: 4, .. }
        ));
        // Trailing non-comment garbage is still rejected.
        assert!(matches!(
            parse_graph("p edge 2 1\ne 1 2\nextra\n").unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn independence_checks() {
        let g = parse_graph("p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap(); // path
        assert!(g.is_independent(0b0101)); // {0, 2}
        assert!(!g.is_independent(0b0011)); // {0, 1}
        assert!(g.is_independent(0));
    }

    #[test]
    fn linsat_round_trip() {
        let text = "p linsat 3 2 7\n101\n010\n111\n3 4\n";
        let ls = parse_linsat(text).unwrap();
        assert_eq!(ls.n_rows(), 3);
        assert_eq!(ls.m_cols(), 2);
        assert_eq!(ls.t(), 7);
        // First character of a bitstring is row 0.
        assert_eq!(ls.column(0), 0b101);
        assert_eq!(ls.column(1), 0b010);
        assert_eq!(ls.b(), 0b111);
        assert_eq!(ls.weights(), &[3, 4]);
        assert_eq!(serialize_linsat(&ls), text);
    }

    #[test]
    fn linsat_parse_errors() {
        assert!(matches!(
            parse_linsat("p linsat 3 1 0\n10\n111\n1\n").unwrap_err(),
            Error::Parse { line: 2, .. } // wrong bitstring width
        ));
        assert!(matches!(
            parse_linsat("p linsat 2 1 0\n10\n11\n1 2\n").unwrap_err(),
            Error::Parse { line: 4, .. } // weight count mismatch
        ));
    }

    #[test]
    fn seeds_are_reproducible_and_paths_diverge() {
        let a = RandomSeed::new(42);
        let b = RandomSeed::new(42);
        let mut ra = a.rng();
        let mut rb = b.rng();
        assert_eq!(ra.random::<u64>(), rb.random::<u64>());
        let c1 = a.derive(1);
        let c2 = a.derive(2);
        assert_ne!(c1.rng().random::<u64>(), c2.rng().random::<u64>());
        // Deriving the same index twice is identical.
        assert_eq!(
            a.derive(7).derive(3).rng().random::<u64>(),
            a.derive(7).derive(3).rng().random::<u64>()
        );
    }

    #[test]
    fn brute_force_cover_minimum_certificate() {
        // n=2, sets {0}, {1}, {0,1}: one set suffices.
        let i = inst(2, &[&[0], &[1], &[0, 1]], 1);
        match brute_force_set_cover(&i).unwrap() {
            Verdict::Yes(Certificate::SetIndices(c)) => {
                assert_eq!(c, vec![2]);
                assert!(verify_cover(&i, &c));
            }
            other => panic!("expected YES, got {other:?}"),
        }
        // Same family, s = 0: nothing covers a nonempty universe.
        let i0 = i.with_target(0);
        assert_eq!(brute_force_set_cover(&i0).unwrap(), Verdict::No);
    }

    #[test]
    fn brute_force_cover_no_when_uncoverable() {
        let i = inst(3, &[&[0], &[1]], 3); // element 2 uncovered by any set
        assert_eq!(brute_force_set_cover(&i).unwrap(), Verdict::No);
    }

    #[test]
    fn brute_force_cover_empty_universe() {
        let i = SetSystemInstance::new(0, vec![], 0).unwrap();
        assert!(brute_force_set_cover(&i).unwrap().is_yes());
    }

    #[test]
    fn brute_force_partition_exact_size() {
        let i = inst(2, &[&[0], &[1], &[0, 1]], 2);
        match brute_force_set_partition(&i).unwrap() {
            Verdict::Yes(Certificate::SetIndices(c)) => {
                assert_eq!(c, vec![0, 1]);
                assert!(verify_partition(&i, &c));
            }
            other => panic!("expected YES, got {other:?}"),
        }
        // Size 1 partition exists too ({0,1}); size 3 does not.
        assert!(brute_force_set_partition(&i.with_target(1))
            .unwrap()
            .is_yes());
        assert_eq!(
            brute_force_set_partition(&i.with_target(3)).unwrap(),
            Verdict::No
        );
    }

    #[test]
    fn brute_force_partition_rejects_overlap() {
        // {0,1} and {1,2} cover {0,1,2} but overlap at 1.
        let i = inst(3, &[&[0, 1], &[1, 2]], 2);
        assert_eq!(brute_force_set_partition(&i).unwrap(), Verdict::No);
    }

    #[test]
    fn brute_force_partition_uses_empty_sets_for_padding() {
        let sets = vec![0b11u64, 0u64];
        let i = SetSystemInstance::new_allowing_empty(2, sets, 2).unwrap();
        let v = brute_force_set_partition(&i).unwrap();
        match v {
            Verdict::Yes(Certificate::SetIndices(c)) => assert_eq!(c, vec![0, 1]),
            other => panic!("expected YES via empty padding, got {other:?}"),
        }
    }

    #[test]
    fn brute_force_guards_trip() {
        let sets: Vec<u64> = (0..25).map(|_| 1u64).collect();
        let i = SetSystemInstance::new(1, sets, 1).unwrap();
        assert!(matches!(
            brute_force_set_cover(&i).unwrap_err(),
            Error::GuardExceeded(_)
        ));
        assert!(matches!(
            brute_force_set_partition(&i).unwrap_err(),
            Error::GuardExceeded(_)
        ));
    }

    #[test]
    fn chromatic_known_graphs() {
        let triangle = parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(brute_force_chromatic(&triangle).unwrap(), 3);
        let empty4 = SimpleGraph::new(4).unwrap();
        assert_eq!(brute_force_chromatic(&empty4).unwrap(), 1);
        let c5 = parse_graph("p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n").unwrap();
        assert_eq!(brute_force_chromatic(&c5).unwrap(), 3); // odd cycle
        let zero = SimpleGraph::new(0).unwrap();
        assert_eq!(brute_force_chromatic(&zero).unwrap(), 0);
    }

    #[test]
    fn coloring_classes_verify() {
        let c5 = parse_graph("p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n").unwrap();
        let classes = k_coloring_classes(&c5, 3).unwrap().unwrap();
        assert!(verify_coloring(&c5, &classes, 3));
        assert!(k_coloring_classes(&c5, 2).unwrap().is_none());
    }

    #[test]
    fn brute_force_linsat_examples() {
        // Identity columns: choose columns 0 and 1 to hit b = 110.
        let ls =
            LinSatInstance::new(3, vec![0b001, 0b010, 0b100], 0b011, vec![1, 2, 5], 3).unwrap();
        match brute_force_linsat(&ls).unwrap() {
            Verdict::Yes(Certificate::Columns(c)) => {
                assert_eq!(c, vec![0, 1]);
                assert!(verify_linsat(&ls, &c));
            }
            other => panic!("expected YES, got {other:?}"),
        }
        // Budget below the only solution's cost.
        assert_eq!(brute_force_linsat(&ls.with_budget(2)).unwrap(), Verdict::No);
        // b = 0 is always solvable by the empty choice at cost 0.
        let zero = LinSatInstance::new(3, vec![0b001], 0, vec![9], 0).unwrap();
        assert!(brute_force_linsat(&zero).unwrap().is_yes());
    }

    #[test]
    fn brute_force_linsat_prefers_cheap_solutions() {
        // Two ways to reach b: column 2 alone (cost 1) or columns 0+1 (cost 7).
        let ls = LinSatInstance::new(2, vec![0b01, 0b10, 0b11], 0b11, vec![3, 4, 1], 10).unwrap();
        match brute_force_linsat(&ls).unwrap() {
            Verdict::Yes(Certificate::Columns(c)) => assert_eq!(c, vec![2]),
            other => panic!("expected YES, got {other:?}"),
        }
    }

    #[test]
    fn generator_plants_disjoint_blocks() {
        let params = GeneratorParams {
            n: 6,
            m: 10,
            max_set_size: 2,
            planted: true,
            s: 3,
        };
        let seed = RandomSeed::new(1);
        let i = generate_random_instance(&params, &seed).unwrap();
        assert_eq!(i.n(), 6);
        assert_eq!(i.m(), 10);
        assert_eq!(i.s(), 3);
        assert!(i.sets().iter().all(|&s| s != 0));
        assert!(i.sets().iter().all(|&s| s.count_ones() <= 2));
        // A planted partition must exist.
        assert!(brute_force_set_partition(&i).unwrap().is_yes());
        // Determinism.
        let j = generate_random_instance(&params, &seed).unwrap();
        assert_eq!(i, j);
        // Different seed, (almost surely) different instance.
        let k = generate_random_instance(&params, &RandomSeed::new(2)).unwrap();
        assert_ne!(i, k);
    }

    #[test]
    fn generator_empty_family() {
        let params = GeneratorParams {
            n: 4,
            m: 0,
            max_set_size: 2,
            planted: false,
            s: 1,
        };
        let i = generate_random_instance(&params, &RandomSeed::new(7)).unwrap();
        assert_eq!(i.m(), 0);
    }

    #[test]
    fn generator_rejects_infeasible_plants() {
        let bad = GeneratorParams {
            n: 6,
            m: 10,
            max_set_size: 1,
            planted: true,
            s: 3,
        };
        assert!(matches!(
            generate_random_instance(&bad, &RandomSeed::new(0)).unwrap_err(),
            Error::InfeasibleParams(_)
        ));
        let bad2 = GeneratorParams {
            n: 6,
            m: 2,
            max_set_size: 3,
            planted: true,
            s: 3,
        };
        assert!(generate_random_instance(&bad2, &RandomSeed::new(0)).is_err());
    }

    #[test]
    fn random_graph_is_deterministic() {
        let g1 = generate_random_graph(8, 0.5, &RandomSeed::new(3)).unwrap();
        let g2 = generate_random_graph(8, 0.5, &RandomSeed::new(3)).unwrap();
        assert_eq!(g1, g2);
        let g3 = generate_random_graph(8, 0.0, &RandomSeed::new(3)).unwrap();
        assert_eq!(g3.edge_count(), 0);
        let g4 = generate_random_graph(8, 1.0, &RandomSeed::new(3)).unwrap();
        assert_eq!(g4.edge_count(), 28);
    }

    #[test]
    fn planted_linsat_is_yes() {
        for seed in 0..20 {
            let ls = generate_random_linsat(6, 8, 10, true, &RandomSeed::new(seed)).unwrap();
            assert!(brute_force_linsat(&ls).unwrap().is_yes(), "seed {seed}");
        }
    }

    #[test]
    fn verify_rejects_malformed_certificates() {
        let i = inst(2, &[&[0], &[1]], 2);
        assert!(verify_partition(&i, &[0, 1]));
        assert!(!verify_partition(&i, &[0, 0])); // duplicate index
        assert!(!verify_partition(&i, &[0])); // wrong size
        assert!(!verify_cover(&i, &[0])); // not a cover
        assert!(verify_cover(&i, &[0, 1]));
    }
}
