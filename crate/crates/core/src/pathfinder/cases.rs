//! Direct construction of a three-channel path from the channel indices.
//!
//! Each channel index points at one or two concrete channels: the channel
//! across the glued edge when the sign flips, otherwise a channel inside the
//! larger of the two fans. Three of them, taken left to right, are then
//! joined by edge paths that respect the allowability rules.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{validate_path, AllowablePath, Arc, PathError};
use crate::contfrac::{channel_indices, exceptional_form, EvenCF};
use crate::diagram::{ChannelId, Diagram, EdgeKind, VertexId};

/// How a channel index arises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    /// `b_i b_{i+1} < 0`
    SignChange,
    /// `b_i b_{i+1} > 4`
    LargeProduct,
}

/// Finer split used when the second and third indices both come from large
/// products after a leading sign change, or all three do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunBranch {
    /// `|b_2| >= 4`, so the second index is 2.
    LargeSecondEntry,
    /// `b_2 .. b_i` are `±2` and `|b_{i+1}| >= 6`.
    WideFan,
    /// `b_2 .. b_i` are `±2` and `|b_{i+1}| = 4`.
    NarrowFan,
}

/// The shape of the first three channel indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CaseLabel {
    pub kinds: [IndexKind; 3],
    pub branch: Option<RunBranch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CasePath {
    pub label: CaseLabel,
    pub indices: [usize; 3],
    pub path: AllowablePath,
}

fn kind(b: &[i64], i: usize) -> IndexKind {
    if b[i - 1] * b[i] < 0 {
        IndexKind::SignChange
    } else {
        IndexKind::LargeProduct
    }
}

/// Classifies the first three channel indices of `cf`.
pub fn case_label(cf: &EvenCF) -> Option<CaseLabel> {
    let b = cf.entries();
    let idx = channel_indices(cf);
    let [first, i, j] = idx.get(..3)?.try_into().ok()?;
    let kinds = [kind(b, first), kind(b, i), kind(b, j)];
    let run_shape = matches!(
        kinds,
        [IndexKind::SignChange, IndexKind::LargeProduct, IndexKind::LargeProduct]
            | [IndexKind::LargeProduct, IndexKind::LargeProduct, IndexKind::LargeProduct]
    );
    let branch = run_shape.then(|| {
        if b[1].abs() >= 4 {
            RunBranch::LargeSecondEntry
        } else if b[i].abs() >= 6 {
            RunBranch::WideFan
        } else {
            RunBranch::NarrowFan
        }
    });
    Some(CaseLabel { kinds, branch })
}

/// Channels inside fan `f` (both triangles belong to it), in strip order.
fn internal_channels(d: &Diagram, f: usize) -> Vec<ChannelId> {
    let tris = &d.fans()[f].triangles;
    (0..d.channels().len())
        .filter(|&c| {
            let (s, t) = d.channels()[c].triangles;
            tris.contains(&s) && tris.contains(&t)
        })
        .collect()
}

/// Concrete channels that realize channel index `i` (counted from 1).
fn candidates(d: &Diagram, i: usize) -> Vec<ChannelId> {
    let b = d.entries();
    if b[i - 1] * b[i] < 0 {
        let glued = d.fans()[i - 1].terminal_edge;
        return (0..d.channels().len()).filter(|&c| d.channels()[c].shared_edge == glued).collect();
    }
    let mut out = Vec::new();
    if b[i - 1].abs() >= 4 {
        out.extend(internal_channels(d, i - 1).last());
    }
    if b[i].abs() >= 4 {
        out.extend(internal_channels(d, i).first());
    }
    out
}

/// Builds a three-channel allowable path for a fraction with at least three
/// channel indices that is not one of the exceptional shapes.
pub fn construct_case_path(cf: &EvenCF) -> Result<CasePath, PathError> {
    let b = cf.entries();
    let head_ok = b[0] >= 4 || (b[0] == 2 && b.get(1).is_some_and(|&x| x <= -2));
    if !head_ok {
        return Err(PathError::PreconditionViolated(format!("{cf} does not have a normalized head")));
    }
    if exceptional_form(cf).is_some() {
        return Err(PathError::PreconditionViolated(format!("{cf} has the exceptional shape")));
    }
    let label = case_label(cf)
        .ok_or_else(|| PathError::PreconditionViolated(format!("{cf} has fewer than three channel indices")))?;
    let d = Diagram::build(cf);
    let idx = channel_indices(cf);
    let options: Vec<(usize, Vec<ChannelId>)> = idx.iter().map(|&i| (i, candidates(&d, i))).collect();

    let mut chosen: Vec<(usize, ChannelId)> = Vec::new();
    let mut linker = Linker::new(&d);
    if pick(&d, &options, 0, &mut chosen, &mut linker) {
        let arcs = linker.arcs.clone();
        let path = validate_path(&d, &arcs)?;
        let indices = [chosen[0].0, chosen[1].0, chosen[2].0];
        return Ok(CasePath { label, indices, path });
    }
    Err(PathError::ConstructionFailed(format!("{cf}: no joinable choice of three index channels")))
}

/// Chooses channels for successive indices, left to right, and tries to
/// join each full choice.
fn pick(
    d: &Diagram,
    options: &[(usize, Vec<ChannelId>)],
    from: usize,
    chosen: &mut Vec<(usize, ChannelId)>,
    linker: &mut Linker,
) -> bool {
    if chosen.len() == 3 {
        let channels: Vec<ChannelId> = chosen.iter().map(|&(_, c)| c).collect();
        return linker.join(&channels);
    }
    for k in from..options.len() {
        let (i, ref cands) = options[k];
        for &c in cands {
            let after = chosen.last().is_none_or(|&(_, p)| d.channels()[c].triangles.0 > d.channels()[p].triangles.1);
            if !after {
                continue;
            }
            chosen.push((i, c));
            if pick(d, options, k + 1, chosen, linker) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Joins fixed channels with edge paths under the allowability rules.
struct Linker<'a> {
    d: &'a Diagram,
    /// edges at each vertex, boundary edges first
    incident: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    nodes: u64,
}

const LINK_BUDGET: u64 = 200_000;

impl<'a> Linker<'a> {
    fn new(d: &'a Diagram) -> Self {
        let mut incident = vec![Vec::new(); d.vertices().len()];
        for (e, edge) in d.edges().iter().enumerate() {
            incident[edge.ends.0].push(e);
            incident[edge.ends.1].push(e);
        }
        for list in &mut incident {
            list.sort_by_key(|&e| (d.edges()[e].kind() == EdgeKind::Interior, e));
        }
        Linker { d, incident, arcs: Vec::new(), nodes: 0 }
    }

    fn join(&mut self, channels: &[ChannelId]) -> bool {
        let d = self.d;
        let mut crossed = FixedBitSet::with_capacity(d.edges().len());
        let mut reserved = FixedBitSet::with_capacity(d.vertices().len());
        for &c in channels {
            let ch = &d.channels()[c];
            crossed.insert(ch.shared_edge);
            reserved.insert(ch.endpoints.0);
            reserved.insert(ch.endpoints.1);
        }
        // waypoints: start, then each channel entered at its left end
        let mut legs: Vec<(VertexId, VertexId)> = Vec::new();
        let mut from = d.start();
        for &c in channels {
            legs.push((from, d.channels()[c].endpoints.0));
            from = d.channels()[c].endpoints.1;
        }
        legs.push((from, d.end()));

        let mut visited = FixedBitSet::with_capacity(d.vertices().len());
        visited.insert(d.start());
        let bounded = FixedBitSet::with_capacity(d.triangles().len());
        self.arcs.clear();
        self.nodes = 0;
        let mut ctx = Leg { crossed, reserved, visited, bounded };
        self.leg(&legs, 0, channels, &mut ctx)
    }

    fn leg(&mut self, legs: &[(VertexId, VertexId)], k: usize, channels: &[ChannelId], ctx: &mut Leg) -> bool {
        let (from, to) = legs[k];
        self.walk(from, to, legs, k, channels, ctx)
    }

    /// Extends the current leg from `at` towards `to` by one edge at a time.
    fn walk(
        &mut self,
        at: VertexId,
        to: VertexId,
        legs: &[(VertexId, VertexId)],
        k: usize,
        channels: &[ChannelId],
        ctx: &mut Leg,
    ) -> bool {
        if at == to {
            if k == channels.len() {
                return true;
            }
            // cross the channel, then continue with the next leg
            let ch = &self.d.channels()[channels[k]];
            let exit = ch.endpoints.1;
            if ctx.visited.contains(exit) {
                return false;
            }
            ctx.visited.insert(exit);
            self.arcs.push(Arc::Channel(channels[k]));
            if self.leg(legs, k + 1, channels, ctx) {
                return true;
            }
            self.arcs.pop();
            ctx.visited.set(exit, false);
            return false;
        }
        self.nodes += 1;
        if self.nodes > LINK_BUDGET {
            return false;
        }
        for idx in 0..self.incident[at].len() {
            let e = self.incident[at][idx];
            let edge = &self.d.edges()[e];
            let next = edge.other_end(at);
            if ctx.visited.contains(next) || ctx.crossed.contains(e) {
                continue;
            }
            if ctx.reserved.contains(next) && next != to {
                continue;
            }
            if edge.triangles.iter().any(|&t| ctx.bounded.contains(t)) {
                continue;
            }
            let tris = edge.triangles.clone();
            for &t in &tris {
                ctx.bounded.insert(t);
            }
            ctx.visited.insert(next);
            self.arcs.push(Arc::Edge(e));
            if self.walk(next, to, legs, k, channels, ctx) {
                return true;
            }
            self.arcs.pop();
            ctx.visited.set(next, false);
            for &t in &tris {
                ctx.bounded.set(t, false);
            }
        }
        false
    }
}

/// Constraints shared by every leg of one join attempt.
struct Leg {
    crossed: FixedBitSet,
    reserved: FixedBitSet,
    visited: FixedBitSet,
    bounded: FixedBitSet,
}
