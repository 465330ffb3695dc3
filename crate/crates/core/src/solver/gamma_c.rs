use super::{Budget, Exhausted, Meter, SolveResult};
use crate::bitset::VertexSet;
use crate::error::{GameError, SolveError};
use crate::graph::Graph;

/// Minimum size of a connected set `S` with `N[S] ∪ predominated = V`.
///
/// Branch and bound. Every candidate set is grown from its smallest vertex
/// (the seed), so vertices below the seed are excluded. Each node branches on
/// including or excluding one vertex adjacent to the current set. If the
/// budget runs out the result carries the best set found as an upper bound.
pub fn gamma_c(g: &Graph, predominated: &VertexSet, budget: Budget) -> Result<SolveResult, SolveError> {
    if g.n() == 0 || !g.is_connected() {
        return Err(GameError::NotConnected.into());
    }
    if predominated.capacity() != g.n() {
        return Err(GameError::Graph(crate::error::GraphError::SetCapacity {
            capacity: predominated.capacity(),
            n: g.n(),
        })
        .into());
    }
    if predominated.len() == g.n() {
        return Ok(SolveResult::exact(0, Vec::new(), 0));
    }
    let mut search = Search {
        g,
        predominated,
        meter: Meter::new(budget),
        best: greedy(g, predominated),
    };
    let n = g.n();
    let root_bounds: Vec<usize> = (0..n)
        .map(|s| {
            let set = VertexSet::from_iter_with_capacity(n, [s]);
            let excluded = VertexSet::from_iter_with_capacity(n, 0..s);
            1usize.saturating_add(search.bound(&set, &excluded))
        })
        .collect();
    for s in 0..n {
        if root_bounds[s] >= search.best.len() {
            continue;
        }
        let set = VertexSet::from_iter_with_capacity(n, [s]);
        let excluded = VertexSet::from_iter_with_capacity(n, 0..s);
        if search.grow(set, excluded).is_err() {
            let lower = root_bounds[s..].iter().copied().min().unwrap_or(usize::MAX).min(search.best.len());
            let best = search.best.to_vec();
            return Ok(SolveResult::partial(lower.max(1), best.len(), n + 1, g.labels_of(best), search.meter.nodes));
        }
    }
    let best = search.best.to_vec();
    Ok(SolveResult::exact(best.len(), g.labels_of(best), search.meter.nodes))
}

/// Greedy connected dominating set: grow from each start vertex, always
/// adding the neighbor that dominates the most new vertices (or, when none
/// does, the one closest to an undominated vertex). Keeps the smallest.
fn greedy(g: &Graph, predominated: &VertexSet) -> VertexSet {
    let n = g.n();
    let all = g.all_vertices();
    let mut best = all.clone();
    for start in 0..n {
        let mut set = VertexSet::from_iter_with_capacity(n, [start]);
        let mut covered = predominated.union(g.closed(start));
        while covered.len() < n && set.len() < best.len() {
            let uncovered = covered.complement();
            let dist = g.distances_within(&uncovered, &all);
            let frontier = g.closed_neighborhood_of_set(&set).difference(&set);
            let pick = frontier
                .iter()
                .max_by_key(|&v| (g.closed(v).difference_len(&covered), std::cmp::Reverse(dist[v]), std::cmp::Reverse(v)))
                .expect("a connected graph has a frontier until everything is dominated");
            set.insert(pick);
            covered.union_with(g.closed(pick));
        }
        if covered.len() == n && set.len() < best.len() {
            best = set;
        }
    }
    best
}

/// Lower bound on the vertices that must still join `played` before it is a
/// connected dominating set containing `played`, or `usize::MAX` if that is
/// impossible. For an empty `played` this is 1 (or 0 on the empty graph).
pub(crate) fn completion_lower_bound(g: &Graph, played: &VertexSet) -> usize {
    if played.is_empty() {
        return usize::from(g.n() > 0);
    }
    let none = g.empty_set();
    let search = Search { g, predominated: &none, meter: Meter::new(Budget::unlimited()), best: g.all_vertices() };
    search.bound(played, &none)
}

struct Search<'a> {
    g: &'a Graph,
    predominated: &'a VertexSet,
    meter: Meter,
    best: VertexSet,
}

impl Search<'_> {
    fn grow(&mut self, set: VertexSet, excluded: VertexSet) -> Result<(), Exhausted> {
        self.meter.tick()?;
        let g = self.g;
        let covered = self.predominated.union(&g.closed_neighborhood_of_set(&set));
        if covered.len() == g.n() {
            if set.len() < self.best.len() {
                self.best = set;
            }
            return Ok(());
        }
        if set.len().saturating_add(self.bound(&set, &excluded)) >= self.best.len() {
            return Ok(());
        }
        let frontier = g.closed_neighborhood_of_set(&set).difference(&set).difference(&excluded);
        let Some(v) = frontier
            .iter()
            .max_by_key(|&v| (g.closed(v).difference_len(&covered), std::cmp::Reverse(v)))
        else {
            return Ok(());
        };
        let mut with = set.clone();
        with.insert(v);
        self.grow(with, excluded.clone())?;
        let mut without = excluded;
        without.insert(v);
        self.grow(set, without)
    }

    /// Lower bound on how many vertices must still be added to `set`, or
    /// `usize::MAX` when no completion exists.
    ///
    /// New vertices avoid `set` and `excluded`. Group them by connected
    /// component `K` of the remaining graph. An undominated vertex whose
    /// possible dominators all lie in `K` is owned by `K`. Inside `K` the
    /// additions need at least one vertex per owned vertex in a packing of
    /// disjoint neighborhoods, and must reach every owned vertex through `K`
    /// from the current set.
    fn bound(&self, set: &VertexSet, excluded: &VertexSet) -> usize {
        let g = self.g;
        let n = g.n();
        let covered = self.predominated.union(&g.closed_neighborhood_of_set(set));
        let uncovered = covered.complement();
        if uncovered.is_empty() {
            return 0;
        }
        let allowed = g.all_vertices().difference(set).difference(excluded);
        let dist = g.distances_within(set, &allowed);
        let mut component = vec![usize::MAX; n];
        let mut components = 0;
        for v in allowed.iter() {
            if component[v] != usize::MAX {
                continue;
            }
            let seed = VertexSet::from_iter_with_capacity(n, [v]);
            for (w, &d) in g.distances_within(&seed, &allowed).iter().enumerate() {
                if d != usize::MAX {
                    component[w] = components;
                }
            }
            components += 1;
        }
        let mut reach = vec![0usize; components];
        let mut packing = vec![0usize; components];
        let mut packed = vec![g.empty_set(); components];
        let mut global_reach = 1;
        for u in uncovered.iter() {
            let dominators = g.closed(u).intersection(&allowed);
            let Some(first) = dominators.first() else {
                return usize::MAX;
            };
            // Additions needed before some vertex of N[u] joins the set.
            let need = dominators.iter().map(|w| dist[w]).min().unwrap_or(usize::MAX);
            if need == usize::MAX {
                return usize::MAX;
            }
            global_reach = global_reach.max(need);
            let k = component[first];
            if dominators.iter().all(|w| component[w] == k) {
                reach[k] = reach[k].max(need);
                if !dominators.intersects(&packed[k]) {
                    packed[k].union_with(&dominators);
                    packing[k] += 1;
                }
            }
        }
        let per_component: usize = (0..components).map(|k| reach[k].max(packing[k])).sum();
        per_component.max(global_reach)
    }
}
