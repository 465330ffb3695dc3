//! Building-block graphs: the spine graph `H_n`, the variable gadget `B`, the
//! clause gadget `C(m)` and the parity gadget `A`.
//!
//! Every builder has an `embed_*` form that adds the gadget to an existing
//! [`GraphBuilder`] under a label prefix (`"B3:"`, `"H:"`, ...) and returns the
//! ids of its named vertices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Graph, GraphBuilder, VertexId};

/// Named vertices of an embedded `H_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnIds {
    pub n: usize,
    /// `u[0] ..= u[n+1]`
    pub u: Vec<VertexId>,
    /// `x[i]` for `i in 1..n`; index 0 is unused and equals `usize::MAX`.
    pub x: Vec<VertexId>,
    /// `y[i]` for `i in 1..n`; index 0 is unused and equals `usize::MAX`.
    pub y: Vec<VertexId>,
}

impl HnIds {
    /// Finds an `H_n` laid out under `prefix` by its labels. The size is read
    /// off the largest `u` index; every expected vertex and edge must exist.
    pub fn locate(g: &Graph, prefix: &str) -> Option<HnIds> {
        let mut top = 0;
        while g.id(&format!("{prefix}u{}", top + 1)).is_some() {
            top += 1;
        }
        if top < 3 {
            return None;
        }
        let n = top - 1;
        let u = (0..=n + 1).map(|i| g.id(&format!("{prefix}u{i}"))).collect::<Option<Vec<_>>>()?;
        let mut x = vec![usize::MAX];
        let mut y = vec![usize::MAX];
        for i in 1..n {
            x.push(g.id(&format!("{prefix}x{i}"))?);
            y.push(g.id(&format!("{prefix}y{i}"))?);
        }
        let ok = (0..=n).all(|i| g.has_edge(u[i], u[i + 1]))
            && (1..n).all(|i| {
                g.has_edge(u[i], x[i]) && g.has_edge(x[i], y[i]) && g.has_edge(y[i], u[i + 1]) && g.has_edge(u[i + 1], x[i])
            });
        ok.then_some(HnIds { n, u, x, y })
    }

    pub fn all(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.u
            .iter()
            .chain(self.x.iter().skip(1))
            .chain(self.y.iter().skip(1))
            .copied()
    }
}

/// Vertices `u_0..u_{n+1}`, `x_1..x_{n-1}`, `y_1..y_{n-1}` with edges
/// `u_i u_{i+1}` (`0 <= i <= n`) and `u_i x_i`, `x_i y_i`, `y_i u_{i+1}`,
/// `u_{i+1} x_i` (`1 <= i <= n-1`).
pub fn embed_hn(b: &mut GraphBuilder, n: usize, prefix: &str) -> Result<HnIds, GraphError> {
    if n < 2 {
        return Err(GraphError::Parse { line: 0, message: format!("H_n needs n >= 2, got {n}") });
    }
    let u = (0..=n + 1)
        .map(|i| b.add_vertex(&format!("{prefix}u{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut x = vec![usize::MAX];
    for i in 1..n {
        x.push(b.add_vertex(&format!("{prefix}x{i}"))?);
    }
    let mut y = vec![usize::MAX];
    for i in 1..n {
        y.push(b.add_vertex(&format!("{prefix}y{i}"))?);
    }
    for i in 0..=n {
        b.add_edge(u[i], u[i + 1])?;
    }
    for i in 1..n {
        b.add_edge(u[i], x[i])?;
        b.add_edge(x[i], y[i])?;
        b.add_edge(y[i], u[i + 1])?;
        b.add_edge(u[i + 1], x[i])?;
    }
    Ok(HnIds { n, u, x, y })
}

pub fn build_hn(n: usize) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new();
    embed_hn(&mut b, n, "")?;
    Ok(b.build())
}

/// Local labels of `B`, in id order.
pub const B_LABELS: [&str; 10] = ["a", "e", "b", "b'", "h", "k", "f^1", "g^1", "f^2", "g^2"];

/// Edges of `B`, transcribed from its drawing.
pub const B_EDGES: [(&str, &str); 15] = [
    ("a", "e"),
    ("e", "b"),
    ("b", "b'"),
    ("a", "h"),
    ("h", "e"),
    ("e", "f^1"),
    ("f^1", "b"),
    ("b", "f^2"),
    ("f^2", "e"),
    ("e", "g^1"),
    ("g^1", "f^1"),
    ("e", "g^2"),
    ("g^2", "f^2"),
    ("h", "k"),
    ("k", "a"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BIds {
    pub a: VertexId,
    pub e: VertexId,
    pub b: VertexId,
    pub b_prime: VertexId,
    pub h: VertexId,
    pub k: VertexId,
    pub f1: VertexId,
    pub g1: VertexId,
    pub f2: VertexId,
    pub g2: VertexId,
}

impl BIds {
    pub fn all(&self) -> [VertexId; 10] {
        [self.a, self.e, self.b, self.b_prime, self.h, self.k, self.f1, self.g1, self.f2, self.g2]
    }

    pub fn f(&self, which: usize) -> VertexId {
        if which == 1 {
            self.f1
        } else {
            self.f2
        }
    }
}

pub fn embed_b(b: &mut GraphBuilder, prefix: &str) -> Result<BIds, GraphError> {
    let ids = B_LABELS
        .iter()
        .map(|l| b.add_vertex(&format!("{prefix}{l}")))
        .collect::<Result<Vec<_>, _>>()?;
    for (x, y) in B_EDGES {
        b.add_edge_by_label(&format!("{prefix}{x}"), &format!("{prefix}{y}"))?;
    }
    Ok(BIds {
        a: ids[0],
        e: ids[1],
        b: ids[2],
        b_prime: ids[3],
        h: ids[4],
        k: ids[5],
        f1: ids[6],
        g1: ids[7],
        f2: ids[8],
        g2: ids[9],
    })
}

pub fn build_b() -> Graph {
    let mut b = GraphBuilder::new();
    embed_b(&mut b, "").expect("B is well formed");
    b.build()
}

/// Named vertices of an embedded `C(m)`. `c_sup[i]`/`d_sup[i]` hold `c^i`/`d^i`
/// for `i in 1..=m`; index 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmIds {
    pub m: usize,
    pub c: VertexId,
    pub d: VertexId,
    pub c_sup: Vec<VertexId>,
    pub d_sup: Vec<VertexId>,
}

impl CmIds {
    pub fn all(&self) -> impl Iterator<Item = VertexId> + '_ {
        [self.c, self.d]
            .into_iter()
            .chain(self.c_sup.iter().skip(1).copied())
            .chain(self.d_sup.iter().skip(1).copied())
    }

    /// `{c, c^1, ..., c^m}`: the vertices wired to variable gadgets.
    pub fn c_side(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.c).chain(self.c_sup.iter().skip(1).copied())
    }
}

/// Vertex set `{c, c^1..c^m, d, d^1..d^m}`, edges `cd`, `cd^i`, `c^i d^i`.
pub fn embed_cm(b: &mut GraphBuilder, m: usize, prefix: &str) -> Result<CmIds, GraphError> {
    if m < 1 {
        return Err(GraphError::Parse { line: 0, message: "C(m) needs m >= 1".into() });
    }
    let c = b.add_vertex(&format!("{prefix}c"))?;
    let mut c_sup = vec![usize::MAX];
    for i in 1..=m {
        c_sup.push(b.add_vertex(&format!("{prefix}c^{i}"))?);
    }
    let d = b.add_vertex(&format!("{prefix}d"))?;
    let mut d_sup = vec![usize::MAX];
    for i in 1..=m {
        d_sup.push(b.add_vertex(&format!("{prefix}d^{i}"))?);
    }
    b.add_edge(c, d)?;
    for i in 1..=m {
        b.add_edge(c, d_sup[i])?;
        b.add_edge(c_sup[i], d_sup[i])?;
    }
    Ok(CmIds { m, c, d, c_sup, d_sup })
}

pub fn build_cm(m: usize) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new();
    embed_cm(&mut b, m, "")?;
    Ok(b.build())
}

pub const A_LABELS: [&str; 7] = ["p1", "p2", "p3", "q1", "q2", "r1", "r2"];

/// Edges of `A`, transcribed from its drawing.
pub const A_EDGES: [(&str, &str); 10] = [
    ("p1", "p2"),
    ("p2", "p3"),
    ("p1", "q1"),
    ("q1", "r1"),
    ("p2", "q1"),
    ("p2", "r1"),
    ("p2", "q2"),
    ("q2", "r2"),
    ("p3", "q2"),
    ("p3", "r2"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AIds {
    pub p1: VertexId,
    pub p2: VertexId,
    pub p3: VertexId,
    pub q1: VertexId,
    pub q2: VertexId,
    pub r1: VertexId,
    pub r2: VertexId,
}

impl AIds {
    pub fn all(&self) -> [VertexId; 7] {
        [self.p1, self.p2, self.p3, self.q1, self.q2, self.r1, self.r2]
    }
}

pub fn embed_a(b: &mut GraphBuilder, prefix: &str) -> Result<AIds, GraphError> {
    let ids = A_LABELS
        .iter()
        .map(|l| b.add_vertex(&format!("{prefix}{l}")))
        .collect::<Result<Vec<_>, _>>()?;
    for (x, y) in A_EDGES {
        b.add_edge_by_label(&format!("{prefix}{x}"), &format!("{prefix}{y}"))?;
    }
    Ok(AIds { p1: ids[0], p2: ids[1], p3: ids[2], q1: ids[3], q2: ids[4], r1: ids[5], r2: ids[6] })
}

pub fn build_a() -> Graph {
    let mut b = GraphBuilder::new();
    embed_a(&mut b, "").expect("A is well formed");
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    H,
    B,
    C,
    A,
}

impl FromStr for GadgetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" | "hn" => Ok(GadgetKind::H),
            "b" => Ok(GadgetKind::B),
            "c" | "cm" => Ok(GadgetKind::C),
            "a" => Ok(GadgetKind::A),
            other => Err(format!("unknown gadget `{other}` (expected h|b|c|a)")),
        }
    }
}

/// A gadget kind plus its size parameter (`n` for `H_n`, `m` for `C(m)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GadgetSpec {
    pub kind: GadgetKind,
    pub param: Option<usize>,
}

impl GadgetSpec {
    pub fn new(kind: GadgetKind, param: Option<usize>) -> Self {
        GadgetSpec { kind, param }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        let need = |what: &str| GraphError::Parse { line: 0, message: format!("gadget {what} needs a size parameter") };
        match self.kind {
            GadgetKind::H => build_hn(self.param.ok_or_else(|| need("h"))?),
            GadgetKind::C => build_cm(self.param.ok_or_else(|| need("c"))?),
            GadgetKind::B => Ok(build_b()),
            GadgetKind::A => Ok(build_a()),
        }
    }
}

impl fmt::Display for GadgetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.param) {
            (GadgetKind::H, Some(n)) => write!(f, "H_{n}"),
            (GadgetKind::C, Some(m)) => write!(f, "C({m})"),
            (GadgetKind::B, _) => f.write_str("B"),
            (GadgetKind::A, _) => f.write_str("A"),
            (kind, None) => write!(f, "{kind:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::VertexSet;

    #[test]
    fn hn_counts() {
        for n in 2..=13 {
            let g = build_hn(n).unwrap();
            assert_eq!(g.n(), 3 * n, "H_{n}");
            assert_eq!(g.edge_count(), (n + 1) + 4 * (n - 1), "H_{n}");
            assert!(g.is_connected());
        }
        let h6 = build_hn(6).unwrap();
        assert_eq!((h6.n(), h6.edge_count()), (18, 27));
        let h2 = build_hn(2).unwrap();
        assert_eq!((h2.n(), h2.edge_count()), (6, 7));
        assert!(build_hn(1).is_err());
    }

    #[test]
    fn hn_edges_follow_the_definition() {
        let g = build_hn(4).unwrap();
        let e = |a: &str, b: &str| g.has_edge(g.require(a).unwrap(), g.require(b).unwrap());
        assert!(e("u0", "u1") && e("u4", "u5"));
        assert!(e("u1", "x1") && e("x1", "y1") && e("y1", "u2") && e("u2", "x1"));
        assert!(!e("u1", "y1"));
        assert!(!e("u0", "x1"));
    }

    #[test]
    fn b_counts_and_dominating_triple() {
        let g = build_b();
        assert_eq!((g.n(), g.edge_count()), (10, 15));
        assert!(g.is_connected());
        let triple = VertexSet::from_iter_with_capacity(g.n(), g.ids(&["a", "e", "b"]).unwrap());
        assert!(g.is_connected_induced(&triple).unwrap());
        assert_eq!(g.closed_neighborhood_of_set(&triple), g.all_vertices());
    }

    #[test]
    fn cm_counts_and_unique_d_dominator() {
        let g = build_cm(3).unwrap();
        assert_eq!((g.n(), g.edge_count()), (8, 7));
        assert!(g.is_connected());
        let d_side = VertexSet::from_iter_with_capacity(g.n(), g.ids(&["d", "d^1", "d^2", "d^3"]).unwrap());
        let covering: Vec<_> = (0..g.n()).filter(|&v| d_side.is_subset(g.closed(v))).collect();
        assert_eq!(g.labels_of(covering), vec!["c"]);
        assert!(build_cm(0).is_err());
    }

    #[test]
    fn a_counts() {
        let g = build_a();
        assert_eq!((g.n(), g.edge_count()), (7, 10));
        assert!(g.is_connected());
    }

    #[test]
    fn labels_are_stable() {
        assert_eq!(build_b().labels(), B_LABELS);
        assert_eq!(build_a().labels(), A_LABELS);
        assert_eq!(build_cm(2).unwrap().labels(), ["c", "c^1", "c^2", "d", "d^1", "d^2"]);
        assert_eq!(build_hn(3).unwrap().labels(), ["u0", "u1", "u2", "u3", "u4", "x1", "x2", "y1", "y2"]);
    }

    #[test]
    fn golden_serializations() {
        let b = "n 10\nv 0 a\nv 1 e\nv 2 b\nv 3 b'\nv 4 h\nv 5 k\nv 6 f^1\nv 7 g^1\nv 8 f^2\nv 9 g^2\n\
e a e\ne a h\ne a k\ne e b\ne e h\ne e f^1\ne e g^1\ne e f^2\ne e g^2\ne b b'\ne b f^1\ne b f^2\n\
e h k\ne f^1 g^1\ne f^2 g^2\n";
        assert_eq!(build_b().to_text(), b);
        let a = "n 7\nv 0 p1\nv 1 p2\nv 2 p3\nv 3 q1\nv 4 q2\nv 5 r1\nv 6 r2\n\
e p1 p2\ne p1 q1\ne p2 p3\ne p2 q1\ne p2 q2\ne p2 r1\ne p3 q2\ne p3 r2\ne q1 r1\ne q2 r2\n";
        assert_eq!(build_a().to_text(), a);
    }

    #[test]
    fn spec_build_and_parse() {
        let spec = GadgetSpec::new("h".parse().unwrap(), Some(3));
        assert_eq!(spec.build().unwrap().n(), 9);
        assert!(GadgetSpec::new(GadgetKind::C, None).build().is_err());
        assert!("z".parse::<GadgetKind>().is_err());
    }
}
