//! Exhaustive search for allowable paths carrying many channels.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{validate_path, AllowablePath, Arc, PathError};
use crate::diagram::{Diagram, VertexId};

/// Node limit used when the caller does not pass one.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Reads `BSC_NODE_BUDGET`, falling back to [`DEFAULT_NODE_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var("BSC_NODE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A path reaching the target.
    Found(AllowablePath),
    /// Every path was examined; `best` is the most channels any allowable
    /// path carries, with a witness when there is one.
    ProvenAbsent { best: usize, witness: Option<AllowablePath> },
}

impl SearchOutcome {
    pub fn path(&self) -> Option<&AllowablePath> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            SearchOutcome::ProvenAbsent { witness, .. } => witness.as_ref(),
        }
    }
}

/// Everything about a partial path that constrains how it may continue.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    at: VertexId,
    visited: FixedBitSet,
    /// triangles bounded by a path edge
    bounded: FixedBitSet,
    path_edges: FixedBitSet,
    /// edges crossed by a path channel
    crossed: FixedBitSet,
    channel_triangles: FixedBitSet,
}

enum Stop {
    Budget,
    Reached,
}

struct Search<'a> {
    d: &'a Diagram,
    moves: Vec<Vec<(Arc, VertexId)>>,
    memo: HashMap<State, Option<usize>>,
    nodes: u64,
    budget: u64,
    target: usize,
    best: Option<(usize, Vec<Arc>)>,
    stack: Vec<Arc>,
}

impl<'a> Search<'a> {
    fn new(d: &'a Diagram, target: usize, budget: u64) -> Self {
        let mut moves = vec![Vec::new(); d.vertices().len()];
        for (c, ch) in d.channels().iter().enumerate() {
            let (x, y) = ch.endpoints;
            moves[x].push((Arc::Channel(c), y));
            moves[y].push((Arc::Channel(c), x));
        }
        for (e, edge) in d.edges().iter().enumerate() {
            let (x, y) = edge.ends;
            moves[x].push((Arc::Edge(e), y));
            moves[y].push((Arc::Edge(e), x));
        }
        Search { d, moves, memo: HashMap::new(), nodes: 0, budget, target, best: None, stack: Vec::new() }
    }

    fn root(&self) -> State {
        let n = self.d.vertices().len();
        let t = self.d.triangles().len();
        let e = self.d.edges().len();
        let mut visited = FixedBitSet::with_capacity(n);
        visited.insert(self.d.start());
        State {
            at: self.d.start(),
            visited,
            bounded: FixedBitSet::with_capacity(t),
            path_edges: FixedBitSet::with_capacity(e),
            crossed: FixedBitSet::with_capacity(e),
            channel_triangles: FixedBitSet::with_capacity(t),
        }
    }

    /// The state after taking `arc` to `to`, if the rules allow it.
    fn step(&self, s: &State, arc: Arc, to: VertexId) -> Option<State> {
        if s.visited.contains(to) {
            return None;
        }
        let mut next = s.clone();
        next.at = to;
        next.visited.insert(to);
        match arc {
            Arc::Edge(e) => {
                if s.crossed.contains(e) {
                    return None;
                }
                for &t in &self.d.edges()[e].triangles {
                    if s.bounded.contains(t) {
                        return None;
                    }
                    next.bounded.insert(t);
                }
                next.path_edges.insert(e);
            }
            Arc::Channel(c) => {
                let ch = &self.d.channels()[c];
                if s.path_edges.contains(ch.shared_edge) {
                    return None;
                }
                let (a, b) = ch.triangles;
                if s.channel_triangles.contains(a) || s.channel_triangles.contains(b) {
                    return None;
                }
                next.crossed.insert(ch.shared_edge);
                next.channel_triangles.insert(a);
                next.channel_triangles.insert(b);
            }
        }
        Some(next)
    }

    fn gain(arc: Arc) -> usize {
        matches!(arc, Arc::Channel(_)) as usize
    }

    /// Most channels any continuation from `s` to the end can add, or `None`
    /// when the end is unreachable.
    fn value(&mut self, s: &State, so_far: usize) -> Result<Option<usize>, Stop> {
        if s.at == self.d.end() {
            return Ok(Some(0));
        }
        if let Some(v) = self.memo.get(s) {
            let v = *v;
            if let Some(v) = v {
                self.offer(s, so_far + v)?;
            }
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Stop::Budget);
        }
        let mut best: Option<usize> = None;
        for i in 0..self.moves[s.at].len() {
            let (arc, to) = self.moves[s.at][i];
            let Some(next) = self.step(s, arc, to) else { continue };
            let g = Self::gain(arc);
            self.stack.push(arc);
            let r = self.value(&next, so_far + g);
            self.stack.pop();
            if let Some(v) = r? {
                best = best.max(Some(v + g));
                if next.at == self.d.end() {
                    self.stack.push(arc);
                    let found = self.record(so_far + g, Vec::new());
                    self.stack.pop();
                    found?;
                }
            }
        }
        self.memo.insert(s.clone(), best);
        Ok(best)
    }

    /// A memoized state was reached with `total` channels possible; keep its
    /// best completion if it beats the current witness.
    fn offer(&mut self, s: &State, total: usize) -> Result<(), Stop> {
        if self.best.as_ref().is_some_and(|(b, _)| *b >= total) {
            return Ok(());
        }
        let suffix = self.completion(s);
        self.record(total, suffix)
    }

    fn record(&mut self, total: usize, suffix: Vec<Arc>) -> Result<(), Stop> {
        if self.best.as_ref().is_none_or(|(b, _)| total > *b) {
            let mut arcs = self.stack.clone();
            arcs.extend(suffix);
            self.best = Some((total, arcs));
        }
        if total >= self.target {
            return Err(Stop::Reached);
        }
        Ok(())
    }

    /// Rebuilds an optimal continuation of a fully explored state.
    fn completion(&self, s: &State) -> Vec<Arc> {
        let mut out = Vec::new();
        let mut cur = s.clone();
        while cur.at != self.d.end() {
            let want = self.memo[&cur].expect("completion of a dead state");
            let (arc, next) = self.moves[cur.at]
                .iter()
                .filter_map(|&(arc, to)| self.step(&cur, arc, to).map(|n| (arc, n)))
                .find(|(arc, n)| {
                    let v = if n.at == self.d.end() { Some(0) } else { self.memo.get(n).copied().flatten() };
                    v.map(|v| v + Self::gain(*arc)) == Some(want)
                })
                .expect("explored state has an optimal child");
            out.push(arc);
            cur = next;
        }
        out
    }
}

/// Searches for an allowable path with at least `target` channels.
///
/// The search is exhaustive, so a `ProvenAbsent` answer is a proof that no
/// such path exists; running out of `budget` nodes is reported as an error
/// instead.
pub fn search_max_channels(d: &Diagram, target: usize, budget: u64) -> Result<SearchOutcome, PathError> {
    let mut search = Search::new(d, target.max(1), budget);
    let root = search.root();
    let outcome = search.value(&root, 0);
    let witness = |best: &Option<(usize, Vec<Arc>)>| -> Result<Option<AllowablePath>, PathError> {
        match best {
            Some((n, arcs)) if *n >= 1 => validate_path(d, arcs).map(Some),
            _ => Ok(None),
        }
    };
    match outcome {
        Err(Stop::Budget) => Err(PathError::BudgetExhausted { nodes: search.nodes }),
        Err(Stop::Reached) => {
            let path = witness(&search.best)?.expect("reached target implies a witness");
            Ok(SearchOutcome::Found(path))
        }
        Ok(_) => {
            let best = search.best.as_ref().map_or(0, |(n, _)| *n);
            Ok(SearchOutcome::ProvenAbsent { best, witness: witness(&search.best)? })
        }
    }
}

/// The largest channel count over all allowable paths, with a witness.
pub fn max_channels(d: &Diagram, budget: u64) -> Result<(usize, Option<AllowablePath>), PathError> {
    match search_max_channels(d, usize::MAX, budget)? {
        SearchOutcome::Found(p) => Ok((p.channel_count(), Some(p))),
        SearchOutcome::ProvenAbsent { best, witness } => Ok((best, witness)),
    }
}
