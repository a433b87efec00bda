//! Coxeter diagrams and their finite-type classification.
//!
//! A diagram on `n` nodes is a symmetric matrix of bond labels with 1 on the
//! diagonal and entries `>= 2` off it; label 2 means "no edge". Connected
//! diagrams of finite type are exactly the classical list (paths, forked
//! trees, and dihedral pairs), so classification is a structural match on
//! tree shape and label placement. The result is invariant under node
//! relabeling by construction; a brute-force permutation oracle in the tests
//! double-checks that.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Symmetric bond-label matrix; node indices are 0-based internally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterDiagram {
    n: usize,
    labels: Vec<u32>,
}

impl CoxeterDiagram {
    /// Diagram with `n` nodes and no edges.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "diagram needs at least one node");
        let mut labels = vec![2u32; n * n];
        for i in 0..n {
            labels[i * n + i] = 1;
        }
        CoxeterDiagram { n, labels }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[i * self.n + j]
    }

    /// Set the bond between two distinct nodes. `m = 2` erases the edge.
    pub fn set_label(&mut self, i: usize, j: usize, m: u32) {
        assert!(i != j, "diagonal labels are fixed at 1");
        assert!(m >= 2, "off-diagonal labels start at 2");
        self.labels[i * self.n + j] = m;
        self.labels[j * self.n + i] = m;
    }

    /// Edges `(i, j, m)` with `i < j` and `m >= 3`.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let m = self.label(i, j);
                if m >= 3 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| j != i && self.label(i, j) >= 3)
            .collect()
    }

    pub fn node_degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    /// Connected components as sorted node lists, in sorted order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Induced subdiagram on `keep` (order preserved).
    pub fn induced(&self, keep: &[usize]) -> CoxeterDiagram {
        let mut d = CoxeterDiagram::new(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if a < b {
                    let m = self.label(i, j);
                    if m >= 3 {
                        d.set_label(a, b, m);
                    }
                }
            }
        }
        d
    }

    pub fn delete_vertex(&self, v: usize) -> CoxeterDiagram {
        assert!(v < self.n);
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != v).collect();
        self.induced(&keep)
    }

    /// Relabeled copy: node `i` of the result is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterDiagram {
        assert_eq!(perm.len(), self.n);
        self.induced(perm)
    }

    /// Parse the edge-list format `"n; i j m; i j m; ..."` with 1-based
    /// node indices. Pairs that never appear get label 2.
    pub fn parse(text: &str) -> Result<CoxeterDiagram> {
        let mut parts = text.split(';').map(str::trim);
        let head = parts
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = head
            .parse()
            .map_err(|_| Error::Parse(format!("bad node count `{head}`")))?;
        if n == 0 {
            return Err(Error::Parse("node count must be positive".into()));
        }
        let mut d = CoxeterDiagram::new(n);
        for part in parts {
            if part.is_empty() {
                continue;
            }
            let nums: Vec<&str> = part.split_whitespace().collect();
            if nums.len() != 3 {
                return Err(Error::Parse(format!(
                    "expected `i j m` triple, got `{part}`"
                )));
            }
            let mut parsed = [0u32; 3];
            for (slot, tok) in parsed.iter_mut().zip(&nums) {
                *slot = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number `{tok}`")))?;
            }
            let (i, j, m) = (parsed[0] as usize, parsed[1] as usize, parsed[2]);
            if i < 1 || i > n || j < 1 || j > n {
                return Err(Error::Parse(format!(
                    "node index out of range in `{part}` (nodes are 1..={n})"
                )));
            }
            if i == j {
                return Err(Error::Parse(format!("self edge in `{part}`")));
            }
            if m < 2 {
                return Err(Error::Parse(format!("label must be >= 2 in `{part}`")));
            }
            if d.label(i - 1, j - 1) != 2 {
                return Err(Error::Parse(format!(
                    "duplicate edge for pair {i} {j}"
                )));
            }
            d.set_label(i - 1, j - 1, m);
        }
        Ok(d)
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        for (i, j, m) in self.edges() {
            write!(f, "; {} {} {}", i + 1, j + 1, m)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterDiagram({})", self)
    }
}

impl Serialize for CoxeterDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Irreducible finite Coxeter type. The two classical families with equal
/// Coxeter matrices (B and C) classify as `B`; the catalog keeps them apart
/// where the distinction matters (extended diagrams).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FiniteType {
    A(u32),
    B(u32),
    D(u32),
    E(u32),
    F4,
    G2,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    pub fn rank(&self) -> usize {
        match *self {
            FiniteType::A(n) => n as usize,
            FiniteType::B(n) => n as usize,
            FiniteType::D(n) => n as usize,
            FiniteType::E(n) => n as usize,
            FiniteType::F4 => 4,
            FiniteType::G2 => 2,
            FiniteType::H3 => 3,
            FiniteType::H4 => 4,
            FiniteType::I2(_) => 2,
        }
    }

    /// Degrees of the fundamental invariants, sorted.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = match *self {
            FiniteType::A(n) => (2..=u64::from(n) + 1).collect(),
            FiniteType::B(n) => (1..=u64::from(n)).map(|k| 2 * k).collect(),
            FiniteType::D(n) => {
                let mut v: Vec<u64> = (1..u64::from(n)).map(|k| 2 * k).collect();
                v.push(u64::from(n));
                v
            }
            FiniteType::E(6) => vec![2, 5, 6, 8, 9, 12],
            FiniteType::E(7) => vec![2, 6, 8, 10, 12, 14, 18],
            FiniteType::E(8) => vec![2, 8, 12, 14, 18, 20, 24, 30],
            FiniteType::E(_) => unreachable!("E ranks are 6, 7, 8"),
            FiniteType::F4 => vec![2, 6, 8, 12],
            FiniteType::G2 => vec![2, 6],
            FiniteType::H3 => vec![2, 6, 10],
            FiniteType::H4 => vec![2, 12, 20, 30],
            FiniteType::I2(m) => vec![2, u64::from(m)],
        };
        d.sort_unstable();
        d
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => write!(f, "F4"),
            FiniteType::G2 => write!(f, "G2"),
            FiniteType::H3 => write!(f, "H3"),
            FiniteType::H4 => write!(f, "H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// Multiset of irreducible factors, or the verdict that none exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TypeDecomposition {
    Finite(Vec<FiniteType>),
    NotFinite,
}

impl TypeDecomposition {
    pub fn is_finite(&self) -> bool {
        matches!(self, TypeDecomposition::Finite(_))
    }

    pub fn factors(&self) -> Option<&[FiniteType]> {
        match self {
            TypeDecomposition::Finite(v) => Some(v),
            TypeDecomposition::NotFinite => None,
        }
    }
}

impl fmt::Display for TypeDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeDecomposition::NotFinite => write!(f, "not finite"),
            TypeDecomposition::Finite(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for TypeDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Classify a diagram into finite irreducible factors, sorted canonically.
pub fn classify_finite(d: &CoxeterDiagram) -> TypeDecomposition {
    let mut parts = Vec::new();
    for comp in d.components() {
        match classify_component(d, &comp) {
            Some(t) => parts.push(t),
            None => return TypeDecomposition::NotFinite,
        }
    }
    parts.sort();
    TypeDecomposition::Finite(parts)
}

fn classify_component(d: &CoxeterDiagram, nodes: &[usize]) -> Option<FiniteType> {
    let k = nodes.len();
    if k == 1 {
        return Some(FiniteType::A(1));
    }
    if k == 2 {
        return Some(match d.label(nodes[0], nodes[1]) {
            3 => FiniteType::A(2),
            4 => FiniteType::B(2),
            6 => FiniteType::G2,
            m => FiniteType::I2(m),
        });
    }
    // Rank >= 3: must be a tree (k - 1 edges within the component).
    let edge_count = nodes
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| nodes[a + 1..].iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| d.label(i, j) >= 3)
        .count();
    if edge_count != k - 1 {
        return None;
    }
    let degrees: Vec<usize> = nodes.iter().map(|&i| d.node_degree(i)).collect();
    if degrees.iter().any(|&deg| deg >= 4) {
        return None;
    }
    let forks: Vec<usize> = nodes
        .iter()
        .zip(&degrees)
        .filter(|&(_, &deg)| deg == 3)
        .map(|(&i, _)| i)
        .collect();
    match forks.len() {
        0 => classify_path(d, nodes),
        1 => classify_forked_tree(d, nodes, forks[0]),
        _ => None,
    }
}

fn classify_path(d: &CoxeterDiagram, nodes: &[usize]) -> Option<FiniteType> {
    let k = nodes.len();
    // Walk the path from one endpoint and record the label sequence.
    let start = *nodes.iter().find(|&&i| d.node_degree(i) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    while order.len() < k {
        let cur = *order.last().unwrap();
        let next = d.neighbors(cur).into_iter().find(|&w| w != prev)?;
        prev = cur;
        order.push(next);
    }
    let labels: Vec<u32> = order
        .windows(2)
        .map(|w| d.label(w[0], w[1]))
        .collect();
    let heavy: Vec<(usize, u32)> = labels
        .iter()
        .enumerate()
        .filter(|&(_, &m)| m != 3)
        .map(|(i, &m)| (i, m))
        .collect();
    match heavy.as_slice() {
        [] => Some(FiniteType::A(k as u32)),
        [(pos, 4)] if *pos == 0 || *pos == k - 2 => Some(FiniteType::B(k as u32)),
        [(1, 4)] if k == 4 => Some(FiniteType::F4),
        [(pos, 5)] if (*pos == 0 || *pos == k - 2) && k == 3 => Some(FiniteType::H3),
        [(pos, 5)] if (*pos == 0 || *pos == k - 2) && k == 4 => Some(FiniteType::H4),
        _ => None,
    }
}

fn classify_forked_tree(
    d: &CoxeterDiagram,
    nodes: &[usize],
    fork: usize,
) -> Option<FiniteType> {
    let k = nodes.len();
    // Any heavy bond in a forked tree rules finiteness out.
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            let m = d.label(i, j);
            if m != 2 && m != 3 {
                return None;
            }
        }
    }
    // Lengths of the three arms in edges.
    let mut arms: Vec<usize> = d
        .neighbors(fork)
        .into_iter()
        .map(|first| {
            let mut len = 1;
            let mut prev = fork;
            let mut cur = first;
            loop {
                let next: Vec<usize> = d.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => break, // a second fork; handled by caller's fork count
                }
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => Some(FiniteType::D(k as u32)),
        [1, 2, 2] => Some(FiniteType::E(6)),
        [1, 2, 3] => Some(FiniteType::E(7)),
        [1, 2, 4] => Some(FiniteType::E(8)),
        _ => None,
    }
}
