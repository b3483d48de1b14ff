//! Uniform hypergraphs on at most 64 vertices, the conflict graph of a
//! hypergraph, and validity of Kneser colorings.
//!
//! Vertices are labelled `1..=n`. Vertex `v` occupies bit `v - 1` of an
//! [`Edge`] mask, so intersections are a single `popcount`.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{bits, subsets_of_size};
use crate::error::{invalid, Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices stored as a bit mask. Ordered lexicographically by
/// sorted vertex list, which is the canonical edge order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Edge(u64);

impl Edge {
    pub const fn from_mask(mask: u64) -> Self {
        Edge(mask)
    }

    /// Builds an edge from 1-based vertex labels. Fails on label 0, labels
    /// above 64 and repeated labels.
    pub fn from_vertices(vertices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vertices {
            if v == 0 || v > MAX_VERTICES {
                return Err(Error::InvalidEdge(format!("vertex label {v} out of range")));
            }
            let bit = 1u64 << (v - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidEdge(format!("vertex {v} repeated")));
            }
            mask |= bit;
        }
        Ok(Edge(mask))
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Sorted 1-based vertex labels.
    pub fn vertices(self) -> Vec<usize> {
        bits(self.0).map(|b| b + 1).collect()
    }

    pub fn max_vertex(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub const fn contains(self, other: Edge) -> bool {
        self.0 & other.0 == other.0
    }

    pub const fn union(self, other: Edge) -> Edge {
        Edge(self.0 | other.0)
    }
}

/// `|e ∩ f|`.
pub fn intersect_size(e: Edge, f: Edge) -> usize {
    (e.0 & f.0).count_ones() as usize
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // The first position where the sorted vertex lists differ holds the
        // smallest vertex of the symmetric difference.
        let diff = self.0 ^ other.0;
        let low = diff & diff.wrapping_neg();
        let self_has = self.0 & low != 0;
        match (self_has, self.len().cmp(&other.len())) {
            // Equal sizes: whoever owns the smaller differing vertex is first.
            (true, Ordering::Equal) => Ordering::Less,
            (false, Ordering::Equal) => Ordering::Greater,
            _ => {
                let (a, b) = (self.vertices(), other.vertices());
                a.cmp(&b)
            }
        }
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        f.write_str(&labels.join(" "))
    }
}

/// An `r`-uniform hypergraph on vertex set `[n]` with canonically ordered,
/// pairwise distinct edges.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// Validates and canonicalizes. Duplicate edges are rejected.
    pub fn new(n: usize, r: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        check_dims(n, r)?;
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for &e in &edges {
            if e.len() != r {
                return Err(Error::InvalidEdge(format!("{e:?} does not have {r} vertices")));
            }
            if e.max_vertex() > n {
                return Err(Error::InvalidEdge(format!("{e:?} uses a vertex above {n}")));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(format!("{:?}", w[0])));
        }
        Ok(Hypergraph { n, r, edges })
    }

    pub fn from_vertex_lists(n: usize, r: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let edges = lists
            .iter()
            .map(|l| Edge::from_vertices(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, r, edges)
    }

    /// Trusted constructor for callers that already produce distinct,
    /// valid edges; sorts them.
    pub(crate) fn from_distinct_unchecked(n: usize, r: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == r && e.max_vertex() <= n));
        Hypergraph { n, r, edges }
    }

    /// All `r`-subsets of `[n]`.
    pub fn complete(n: usize, r: usize) -> Result<Self> {
        check_dims(n, r)?;
        let edges = subsets_of_size(n, r).map(Edge).collect();
        Ok(Self::from_distinct_unchecked(n, r, edges))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// True when every two edges share at least `ell` vertices.
    pub fn is_intersecting(&self, ell: usize) -> bool {
        self.edges.iter().enumerate().all(|(i, &e)| {
            self.edges[i + 1..].iter().all(|&f| intersect_size(e, f) >= ell)
        })
    }

    /// Applies a vertex relabelling; `perm[v - 1]` is the new label of `v`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let edges = self
            .edges
            .iter()
            .map(|e| Edge(bits(e.0).fold(0u64, |m, b| m | 1u64 << (perm[b] - 1))))
            .collect();
        Self::from_distinct_unchecked(self.n, self.r, edges)
    }

    /// Size of the symmetric difference of the edge sets.
    pub fn symmetric_difference(&self, other: &Hypergraph) -> usize {
        let (mut i, mut j, mut d) = (0, 0, 0);
        let (a, b) = (&self.edges, &other.edges);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    d += 1;
                    i += 1;
                }
                Ordering::Greater => {
                    d += 1;
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        d + (a.len() - i) + (b.len() - j)
    }

    /// Text form: `n r m` header followed by one edge per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.r, self.edges.len());
        for e in &self.edges {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [n, r, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header needs 3 numbers, found {}", nums.len()),
            });
        };
        check_dims(n, r).map_err(|e| Error::Parse { line: hline, msg: e.to_string() })?;
        let mut edges = Vec::with_capacity(m);
        let mut last_line = hline;
        for (line, body) in lines {
            last_line = line;
            let labels = parse_numbers(line, body)?;
            if labels.len() != r {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {r} labels, found {}", labels.len()),
                });
            }
            if let Some(&v) = labels.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::Parse { line, msg: format!("label {v} outside 1..={n}") });
            }
            let e = Edge::from_vertices(&labels).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            edges.push(e);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: last_line,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Hypergraph::new(n, r, edges).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<usize>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a nonnegative integer: {tok:?}"),
            })
        })
        .collect()
}

fn check_dims(n: usize, r: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    if n == 0 || r == 0 {
        return Err(invalid(format!("n and r must be positive (n={n}, r={r})")));
    }
    Ok(())
}

/// Graph on edge indices; two edges are adjacent when they share fewer than
/// `ell` vertices. Kneser colorings are exactly its proper colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    neighbors: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn from_adjacency(neighbors: Vec<Vec<usize>>) -> Self {
        let mut neighbors = neighbors;
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let g = ConflictGraph { neighbors };
        debug_assert!(g.is_symmetric_irreflexive());
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn is_symmetric_irreflexive(&self) -> bool {
        self.neighbors.iter().enumerate().all(|(u, list)| {
            list.iter().all(|&v| v != u && v < self.neighbors.len() && self.neighbors[v].contains(&u))
        })
    }

    /// True when `colors` assigns different colors to adjacent vertices.
    pub fn is_proper(&self, colors: &[usize]) -> bool {
        colors.len() == self.neighbors.len()
            && self
                .neighbors
                .iter()
                .enumerate()
                .all(|(u, list)| list.iter().all(|&v| colors[u] != colors[v]))
    }
}

/// Builds the conflict graph. Requires `1 <= ell < r`.
pub fn conflict_graph(h: &Hypergraph, ell: usize) -> Result<ConflictGraph> {
    if ell == 0 || ell >= h.r() {
        return Err(invalid(format!("need 1 <= ell < r, got ell={ell}, r={}", h.r())));
    }
    let edges = h.edges();
    let mut neighbors = vec![Vec::new(); edges.len()];
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if intersect_size(edges[i], edges[j]) < ell {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    Ok(ConflictGraph { neighbors })
}

/// An assignment of colors `1..=k` to the edges of a hypergraph, indexed
/// like [`Hypergraph::edges`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KneserColoring {
    k: usize,
    colors: Vec<usize>,
}

impl KneserColoring {
    pub fn new(k: usize, colors: Vec<usize>) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvalidColoring(format!("color {c} outside 1..={k}")));
        }
        Ok(KneserColoring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, edge_index: usize) -> usize {
        self.colors[edge_index]
    }
}

/// True when every color class of `coloring` is pairwise `ell`-intersecting.
/// A coloring that is not total on the edges is never valid.
pub fn is_kneser_coloring(h: &Hypergraph, ell: usize, coloring: &KneserColoring) -> bool {
    let edges = h.edges();
    if coloring.colors.len() != edges.len() {
        return false;
    }
    (0..edges.len()).all(|i| {
        (i + 1..edges.len()).all(|j| {
            coloring.colors[i] != coloring.colors[j] || intersect_size(edges[i], edges[j]) >= ell
        })
    })
}
