//! The graphs `G_F` (Dominator-start) and `G'_F` (Staller-start) built from a
//! positive CNF formula, and the game lengths they are designed to hit.
//!
//! Vertex order is fixed: the `H` copy, then `A` (odd `k` only), then
//! `B_1..B_k`, then `C_1..C_n`. Labels are prefixed `H:`, `A:`, `Bi:`, `Cj:`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::formula::Formula;
use crate::gadgets::{embed_a, embed_b, embed_cm, embed_hn, AIds, BIds, CmIds, HnIds};
use crate::graph::{Graph, GraphBuilder, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `G_F`, played as a D-game.
    #[serde(rename = "d")]
    DGame,
    /// `G'_F`, played as an S-game.
    #[serde(rename = "s")]
    SGame,
}

impl Variant {
    /// Size of the `H` copy when not overridden.
    pub fn default_h_size(self, f: &Formula) -> usize {
        match self {
            Variant::DGame => 2 * f.n() + 7,
            Variant::SGame => 6,
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "dgame" | "d-game" => Ok(Variant::DGame),
            "s" | "sgame" | "s-game" => Ok(Variant::SGame),
            other => Err(format!("unknown variant `{other}` (expected d|s)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::DGame => "d",
            Variant::SGame => "s",
        })
    }
}

/// Ids of every gadget inside a reduction graph. Vectors `b` and `c` are
/// 1-based (index 0 duplicates index 1 and is never used).
#[derive(Clone, Debug)]
pub struct Layout {
    pub h: HnIds,
    pub a: Option<AIds>,
    pub b: Vec<BIds>,
    pub c: Vec<CmIds>,
    /// The `H` vertex wired to every `a_i`, `b_i` (and `p_1`): `u_0` in
    /// `G_F`, `u_7` in `G'_F`.
    pub attach: VertexId,
}

impl Layout {
    pub fn k(&self) -> usize {
        self.b.len() - 1
    }

    pub fn n(&self) -> usize {
        self.c.len() - 1
    }

    /// `i` with `v ∈ B_i`, if any.
    pub fn b_index(&self, v: VertexId) -> Option<usize> {
        (1..self.b.len()).find(|&i| self.b[i].all().contains(&v))
    }

    /// `j` with `v ∈ C_j`, if any.
    pub fn c_index(&self, v: VertexId) -> Option<usize> {
        (1..self.c.len()).find(|&j| self.c[j].all().any(|w| w == v))
    }

    pub fn in_h(&self, v: VertexId) -> bool {
        self.h.all().any(|w| w == v)
    }

    pub fn in_a(&self, v: VertexId) -> bool {
        self.a.is_some_and(|a| a.all().contains(&v))
    }
}

/// A built reduction instance.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub formula: Formula,
    pub variant: Variant,
    pub h_size: usize,
    pub graph: Arc<Graph>,
    pub layout: Layout,
}

impl Reduction {
    pub fn build(formula: &Formula, variant: Variant, h_size: Option<usize>) -> Result<Reduction, GraphError> {
        let k = formula.k();
        let n = formula.n();
        let h_size = h_size.unwrap_or_else(|| variant.default_h_size(formula));
        if variant == Variant::SGame && h_size < 6 {
            return Err(GraphError::Parse { line: 0, message: "G'_F attaches through u7 and needs an H of size >= 6".into() });
        }
        let mut gb = GraphBuilder::new();
        let h = embed_hn(&mut gb, h_size, "H:")?;
        let a = if k % 2 == 1 { Some(embed_a(&mut gb, "A:")?) } else { None };
        let mut b = Vec::with_capacity(k + 1);
        for i in 1..=k {
            b.push(embed_b(&mut gb, &format!("B{i}:"))?);
        }
        let mut c = Vec::with_capacity(n + 1);
        for j in 1..=n {
            c.push(embed_cm(&mut gb, n, &format!("C{j}:"))?);
        }
        // 1-based views: repeat the first entry at index 0.
        b.insert(0, b[0]);
        c.insert(0, c[0].clone());
        let attach = match variant {
            Variant::DGame => h.u[0],
            Variant::SGame => h.u[7],
        };
        for bi in &b[1..] {
            gb.add_edge(attach, bi.a)?;
            gb.add_edge(attach, bi.b)?;
        }
        if let Some(a) = &a {
            gb.add_edge(attach, a.p1)?;
        }
        for (j, cj) in c.iter().enumerate().skip(1) {
            for (i, bi) in b.iter().enumerate().skip(1) {
                if formula.contains(i, j) {
                    for v in cj.c_side() {
                        gb.add_edge(bi.a, v)?;
                    }
                }
            }
        }
        Ok(Reduction {
            formula: formula.clone(),
            variant,
            h_size,
            graph: Arc::new(gb.build()),
            layout: Layout { h, a, b, c, attach },
        })
    }

    /// Whether the `H` copy has the size the construction prescribes.
    pub fn default_h(&self) -> bool {
        self.h_size == self.variant.default_h_size(&self.formula)
    }

    pub fn targets(&self) -> ReductionTargets {
        let mut t = reduction_targets(&self.formula, self.variant);
        if !self.default_h() {
            t.gamma_c_expected = None;
        }
        t
    }
}

pub fn build_gf(f: &Formula, h_size: Option<usize>) -> Result<Reduction, GraphError> {
    Reduction::build(f, Variant::DGame, h_size)
}

pub fn build_gf_prime(f: &Formula, h_size: Option<usize>) -> Result<Reduction, GraphError> {
    Reduction::build(f, Variant::SGame, h_size)
}

/// Game lengths the construction is designed around. `p1_bound` is reached
/// (at most) when Player 1 wins the formula game, `p2_bound` (at least) when
/// Player 2 wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTargets {
    pub variant: Variant,
    /// `γ_c(G_F)`. Not known for `G'_F` or a resized `H` copy.
    pub gamma_c_expected: Option<usize>,
    pub p1_bound: usize,
    pub p2_bound: usize,
}

pub fn reduction_targets(f: &Formula, variant: Variant) -> ReductionTargets {
    let (k, n) = (f.k(), f.n());
    let odd = if k % 2 == 1 { 3 } else { 0 };
    let (gamma_c_expected, p1_bound) = match variant {
        Variant::DGame => (Some(3 * k + 3 * n + 8 + odd), 3 * k + 4 * n + 8 + odd),
        Variant::SGame => (None, 3 * k + 2 * n + 13 + odd),
    };
    ReductionTargets { variant, gamma_c_expected, p1_bound, p2_bound: p1_bound + 1 }
}

/// Vertex and edge counts a reduction graph must have.
pub fn expected_counts(f: &Formula, variant: Variant, h_size: Option<usize>) -> (usize, usize) {
    let (k, n) = (f.k(), f.n());
    let h = h_size.unwrap_or_else(|| variant.default_h_size(f));
    let odd = k % 2 == 1;
    let cross: usize = (1..=n).map(|j| f.clauses()[j - 1].len() * (n + 1)).sum();
    let vertices = 3 * h + if odd { 7 } else { 0 } + 10 * k + n * (2 * n + 2);
    let edges = (h + 1) + 4 * (h - 1) + if odd { 11 } else { 0 } + 17 * k + n * (2 * n + 1) + cross;
    (vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    #[test]
    fn counts() {
        let fig = f("1 3\n2 3 5\n4 5");
        let g = build_gf(&fig, None).unwrap();
        assert_eq!(g.graph.n(), 120);
        assert_eq!((g.graph.n(), g.graph.edge_count()), expected_counts(&fig, Variant::DGame, None));
        let gp = build_gf_prime(&fig, None).unwrap();
        assert_eq!(gp.graph.n(), 99);
        assert_eq!((gp.graph.n(), gp.graph.edge_count()), expected_counts(&fig, Variant::SGame, None));
        assert_eq!(build_gf(&f("1"), None).unwrap().graph.n(), 48);
        assert!(g.graph.is_connected() && gp.graph.is_connected());
    }

    #[test]
    fn cross_edges_follow_clauses() {
        let fig = f("1 3\n2 3 5\n4 5");
        let r = build_gf(&fig, None).unwrap();
        let g = &r.graph;
        for i in 1..=5 {
            for j in 1..=3 {
                let a = g.require(&format!("B{i}:a")).unwrap();
                let c = g.require(&format!("C{j}:c")).unwrap();
                assert_eq!(g.has_edge(a, c), fig.contains(i, j), "B{i}:a ~ C{j}:c");
                let c1 = g.require(&format!("C{j}:c^1")).unwrap();
                assert_eq!(g.has_edge(a, c1), fig.contains(i, j));
            }
        }
        assert!(g.has_edge(g.require("A:p1").unwrap(), g.require("H:u0").unwrap()));
    }

    #[test]
    fn ordering_and_attachment() {
        let r = build_gf(&f("1"), None).unwrap();
        let labels = r.graph.labels();
        assert_eq!(labels[0], "H:u0");
        assert_eq!(labels[27], "A:p1");
        assert_eq!(labels[34], "B1:a");
        assert_eq!(labels[44], "C1:c");
        let even = build_gf_prime(&f("1 2"), None).unwrap();
        assert!(even.layout.a.is_none());
        assert!(even.graph.labels().iter().all(|l| !l.starts_with("A:")));
        let odd = build_gf_prime(&f("1"), None).unwrap();
        let g = &odd.graph;
        let u7 = g.require("H:u7").unwrap();
        // Inside H_6, u7 touches only u6.
        assert_eq!(g.degree(u7), 1 + 2 + 1);
        assert_eq!(odd.layout.attach, u7);
    }

    #[test]
    fn targets() {
        let t = reduction_targets(&f("1 3\n2 3 5\n4 5"), Variant::DGame);
        assert_eq!((t.gamma_c_expected, t.p1_bound, t.p2_bound), (Some(35), 38, 39));
        let t = reduction_targets(&f("1 2"), Variant::DGame);
        assert_eq!((t.gamma_c_expected, t.p1_bound), (Some(17), 18));
        let t = reduction_targets(&f("1"), Variant::SGame);
        assert_eq!((t.gamma_c_expected, t.p1_bound, t.p2_bound), (None, 21, 22));
        let resized = build_gf(&f("1"), Some(5)).unwrap();
        assert_eq!(resized.targets().gamma_c_expected, None);
        assert_eq!(build_gf(&f("1"), None).unwrap().targets().gamma_c_expected, Some(17));
    }
}
