//! The triangulated strip `D(p/q)` spanned by the fans of an even continued
//! fraction, with parity-labelled vertices and channel detection.
//!
//! Fan `i` has its apex at the previous convergent and a rim walking `|b_i|`
//! steps by Farey addition. Consecutive fans are glued along an edge; when
//! their entries share a sign the glue also identifies a whole triangle.
//! Vertices carry parity classes (propagated by mod-2 addition), and exact
//! Farey labels are computed on request as a validation layer.

mod emit;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::contfrac::{ContinuedFraction, EvenCF, ExtRational, Parity};

pub use emit::{emit, Format, Overlay};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type TriangleId = usize;
pub type ChannelId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown output format {0:?} (expected svg or dot)")]
    UnknownFormat(String),
    #[error("diagram invariant violated: {0}")]
    InvariantViolated(String),
    #[error("diagram entries must be nonzero and even, got {0:?}")]
    BadEntries(Vec<i64>),
    #[error("overlay references missing {kind} {id}")]
    DanglingOverlay { kind: &'static str, id: usize },
}

/// Where a vertex sits on the strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
    Start,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub parity: Parity,
    pub side: Side,
    pub label: Option<ExtRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Boundary,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    /// Endpoints, smaller id first.
    pub ends: (VertexId, VertexId),
    /// The one or two triangles this edge bounds, in strip order.
    pub triangles: Vec<TriangleId>,
}

impl Edge {
    pub fn kind(&self) -> EdgeKind {
        if self.triangles.len() == 1 {
            EdgeKind::Boundary
        } else {
            EdgeKind::Interior
        }
    }

    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// Role of an edge relative to the fans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FanRole {
    Initial,
    Terminal,
    Other,
}

/// The block of triangles contributed by one entry `b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub entry: i64,
    pub apex: VertexId,
    /// Rim vertices `r_0 .. r_|b|`.
    pub rim: Vec<VertexId>,
    /// Triangle ids, in strip order; shares its first triangle with the
    /// previous fan when both entries have the same sign.
    pub triangles: Vec<TriangleId>,
    pub initial_edge: EdgeId,
    pub terminal_edge: EdgeId,
}

/// Two adjacent triangles whose off-edge vertices are both odd/odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Channel {
    pub triangles: (TriangleId, TriangleId),
    pub shared_edge: EdgeId,
    /// Off-edge vertex of the first triangle, then of the second.
    pub endpoints: (VertexId, VertexId),
}

impl Channel {
    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.endpoints.0 == v {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    entries: Vec<i64>,
    vertices: Vec<Vertex>,
    triangles: Vec<[VertexId; 3]>,
    edges: Vec<Edge>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    fans: Vec<Fan>,
    channels: Vec<Channel>,
    end: VertexId,
}

/// Projective coordinates carried during construction. Parity bits are
/// always tracked; the exact vector only when labels were requested.
#[derive(Clone)]
struct Coord {
    bits: (bool, bool),
    exact: Option<(BigInt, BigInt)>,
}

impl Coord {
    fn new(n: i64, d: i64, exact: bool) -> Self {
        Coord {
            bits: (n % 2 != 0, d % 2 != 0),
            exact: exact.then(|| (BigInt::from(n), BigInt::from(d))),
        }
    }

    /// `self + t * other`.
    fn add_scaled(&self, other: &Coord, t: i64) -> Coord {
        let odd_t = t % 2 != 0;
        Coord {
            bits: (self.bits.0 ^ (odd_t && other.bits.0), self.bits.1 ^ (odd_t && other.bits.1)),
            exact: self.exact.as_ref().zip(other.exact.as_ref()).map(|((a, b), (c, d))| {
                let t = BigInt::from(t);
                (a + &t * c, b + &t * d)
            }),
        }
    }

    fn neg(&self) -> Coord {
        Coord { bits: self.bits, exact: self.exact.as_ref().map(|(a, b)| (-a, -b)) }
    }

    fn parity(&self) -> Parity {
        Parity::from_bits(self.bits.0, self.bits.1).expect("unimodular vectors are never even/even")
    }

    fn label(&self) -> Option<ExtRational> {
        self.exact.as_ref().map(|(a, b)| ExtRational::from_vector(a, b))
    }
}

struct Builder {
    coords: Vec<Coord>,
    triangles: Vec<[VertexId; 3]>,
}

impl Builder {
    fn vertex(&mut self, c: Coord) -> VertexId {
        self.coords.push(c);
        self.coords.len() - 1
    }

    fn triangle(&mut self, t: [VertexId; 3]) -> TriangleId {
        self.triangles.push(t);
        self.triangles.len() - 1
    }
}

impl Diagram {
    /// Builds from parities alone.
    pub fn build(cf: &EvenCF) -> Diagram {
        Self::construct(cf.entries(), false)
    }

    /// Builds and also records the exact Farey label of every vertex.
    pub fn build_with_labels(cf: &EvenCF) -> Diagram {
        Self::construct(cf.entries(), true)
    }

    /// Builds from any nonempty run of nonzero even entries, including
    /// even-length ones that do not expand a link fraction.
    pub fn from_entries(entries: &[i64], labels: bool) -> Result<Diagram, DiagramError> {
        if entries.is_empty() || entries.iter().any(|&b| b == 0 || b % 2 != 0) {
            return Err(DiagramError::BadEntries(entries.to_vec()));
        }
        Ok(Self::construct(entries, labels))
    }

    fn construct(entries: &[i64], exact: bool) -> Diagram {
        let mut b = Builder { coords: Vec::new(), triangles: Vec::new() };
        // fan geometry in the current frame: apex vector A and rim origin R0
        let start = b.vertex(Coord::new(1, 0, exact));
        let mut apex = b.vertex(Coord::new(0, 1, exact));
        let mut rim0 = start;
        let mut rim0_coord = Coord::new(1, 0, exact);
        let mut prev: Option<(i64, Vec<VertexId>)> = None;
        let mut fan_specs = Vec::new();

        for &entry in entries {
            let s = entry.signum();
            let steps = entry.unsigned_abs() as usize;
            let apex_coord = b.coords[apex].clone();
            let mut rim = vec![rim0];
            let mut tris = Vec::with_capacity(steps);
            for t in 1..=steps {
                let reuse = match &prev {
                    Some((pe, prim)) if t == 1 && pe.signum() == s => Some(prim[prim.len() - 2]),
                    _ => None,
                };
                let v = match reuse {
                    Some(v) => v,
                    None => b.vertex(rim0_coord.add_scaled(&apex_coord, s * t as i64)),
                };
                rim.push(v);
                if reuse.is_some() {
                    // same-sign gluing: this triangle is the previous fan's last
                    tris.push(b.triangles.len() - 1);
                } else {
                    tris.push(b.triangle([apex, rim[t - 1], v]));
                }
            }
            let last = *rim.last().expect("fan has a rim");
            fan_specs.push((entry, apex, rim.clone(), tris));
            // next frame: apex moves to r_|b|, rim origin to the old apex
            rim0_coord = apex_coord.neg();
            rim0 = apex;
            apex = last;
            prev = Some((entry, rim));
        }
        let end = apex;
        Self::assemble(entries, b, fan_specs, start, end)
    }

    fn assemble(
        entries: &[i64],
        b: Builder,
        fan_specs: Vec<(i64, VertexId, Vec<VertexId>, Vec<TriangleId>)>,
        start: VertexId,
        end: VertexId,
    ) -> Diagram {
        // renumber vertices in strip order: start, then the first triangle's
        // rim vertex before its apex, then one new vertex per triangle
        let mut order: Vec<VertexId> = Vec::with_capacity(b.coords.len());
        let mut seen = vec![false; b.coords.len()];
        let mut push = |v: VertexId, order: &mut Vec<VertexId>| {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        };
        let first = b.triangles[0];
        push(start, &mut order);
        push(first[2], &mut order);
        push(first[0], &mut order);
        for t in &b.triangles {
            for &v in t {
                push(v, &mut order);
            }
        }
        let mut new_id = vec![0; b.coords.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let triangles: Vec<[VertexId; 3]> = b
            .triangles
            .iter()
            .map(|t| {
                let mut t = t.map(|v| new_id[v]);
                t.sort_unstable();
                t
            })
            .collect();

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_index = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let id = *edge_index.entry((x, y)).or_insert_with(|| {
                    edges.push(Edge { ends: (x, y), triangles: Vec::new() });
                    edges.len() - 1
                });
                edges[id].triangles.push(ti);
            }
        }
        let edge_of = |x: VertexId, y: VertexId| edge_index[&(x.min(y), x.max(y))];

        let sides = strip_sides(&triangles, entries[0] > 0, new_id[start], new_id[first[0]]);
        let vertices = order
            .iter()
            .enumerate()
            .map(|(i, &old)| Vertex {
                parity: b.coords[old].parity(),
                side: sides[i],
                label: b.coords[old].label(),
            })
            .collect();

        let fans = fan_specs
            .into_iter()
            .map(|(entry, apex, rim, tris)| {
                let apex = new_id[apex];
                let rim: Vec<VertexId> = rim.into_iter().map(|v| new_id[v]).collect();
                Fan {
                    entry,
                    apex,
                    initial_edge: edge_of(apex, rim[0]),
                    terminal_edge: edge_of(apex, rim[rim.len() - 1]),
                    rim,
                    triangles: tris,
                }
            })
            .collect();

        let mut d = Diagram {
            entries: entries.to_vec(),
            vertices,
            triangles,
            edges,
            edge_index,
            fans,
            channels: Vec::new(),
            end: new_id[end],
        };
        d.channels = find_channels(&d);
        d
    }

    /// The fan entries `b_1 .. b_k`.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The fraction named by the entries.
    pub fn value(&self) -> ExtRational {
        ContinuedFraction::new(self.entries.clone()).expect("entries are nonzero").value()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn fans(&self) -> &[Fan] {
        &self.fans
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// The vertex `1/0`.
    pub fn start(&self) -> VertexId {
        0
    }

    /// The vertex `p/q`.
    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn edge_between(&self, x: VertexId, y: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(x.min(y), x.max(y))).copied()
    }

    pub fn has_labels(&self) -> bool {
        self.vertices.iter().all(|v| v.label.is_some())
    }

    pub fn odd_odd_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.parity.is_odd_odd()).count()
    }

    pub fn fan_role(&self, e: EdgeId) -> FanRole {
        if self.fans.iter().any(|f| f.initial_edge == e) {
            FanRole::Initial
        } else if self.fans.iter().any(|f| f.terminal_edge == e) {
            FanRole::Terminal
        } else {
            FanRole::Other
        }
    }

    /// The vertex of triangle `t` not on edge `e`.
    pub fn opposite(&self, t: TriangleId, e: EdgeId) -> VertexId {
        let (x, y) = self.edges[e].ends;
        *self.triangles[t]
            .iter()
            .find(|&&v| v != x && v != y)
            .expect("edge bounds the triangle")
    }

    /// Edge shared by two triangles, if any.
    pub fn shared_edge(&self, s: TriangleId, t: TriangleId) -> Option<EdgeId> {
        let common: Vec<VertexId> =
            self.triangles[s].iter().copied().filter(|v| self.triangles[t].contains(v)).collect();
        match common[..] {
            [x, y] => self.edge_between(x, y),
            _ => None,
        }
    }
}

/// Assigns top/bottom sides walking the strip. The first apex is on top for
/// a positive leading entry; each later vertex sits opposite to the vertex
/// it is retained alongside in the next shared edge.
fn strip_sides(
    triangles: &[[VertexId; 3]],
    leading_positive: bool,
    start: VertexId,
    first_apex: VertexId,
) -> Vec<Side> {
    let n = triangles.iter().flatten().max().map_or(0, |m| m + 1);
    let mut side = vec![Side::Top; n];
    let (up, down) = if leading_positive { (Side::Top, Side::Bottom) } else { (Side::Bottom, Side::Top) };
    side[start] = Side::Start;
    side[first_apex] = up;
    let other = triangles[0].iter().copied().find(|&v| v != start && v != first_apex).unwrap();
    side[other] = down;
    let opposite = |s: Side| if s == Side::Top { Side::Bottom } else { Side::Top };
    for t in 1..triangles.len() {
        let new = triangles[t].iter().copied().find(|v| !triangles[t - 1].contains(v)).unwrap();
        if t + 1 == triangles.len() {
            side[new] = Side::End;
            break;
        }
        let kept = triangles[t]
            .iter()
            .copied()
            .find(|&v| v != new && triangles[t + 1].contains(&v))
            .unwrap();
        side[new] = opposite(side[kept]);
    }
    side
}

/// Every adjacent triangle pair whose two off-edge vertices are odd/odd.
pub fn find_channels(d: &Diagram) -> Vec<Channel> {
    let mut out = Vec::new();
    for s in 0..d.triangles.len().saturating_sub(1) {
        let t = s + 1;
        let Some(e) = d.shared_edge(s, t) else { continue };
        let (x, y) = (d.opposite(s, e), d.opposite(t, e));
        if d.vertices[x].parity.is_odd_odd() && d.vertices[y].parity.is_odd_odd() {
            out.push(Channel { triangles: (s, t), shared_edge: e, endpoints: (x, y) });
        }
    }
    out
}

/// Checks the structural invariants every built diagram must satisfy.
pub fn check_invariants(d: &Diagram) -> Result<(), DiagramError> {
    let bad = |msg: String| Err(DiagramError::InvariantViolated(msg));
    for (ti, t) in d.triangles.iter().enumerate() {
        let [a, b, c] = t.map(|v| d.vertices[v].parity);
        if a == b || b == c || a == c {
            return bad(format!("triangle {ti} repeats a parity class"));
        }
    }
    for (i, f) in d.fans.iter().enumerate() {
        for e in [f.initial_edge, f.terminal_edge] {
            let (x, y) = d.edges[e].ends;
            if d.vertices[x].parity.is_odd_odd() || d.vertices[y].parity.is_odd_odd() {
                return bad(format!("fan {} edge {e} has an odd/odd endpoint", i + 1));
            }
        }
    }
    let entries = d.entries();
    let same_sign = entries.windows(2).filter(|w| w[0] * w[1] > 0).count();
    let expected = entries.iter().map(|b| b.unsigned_abs() as usize).sum::<usize>() - same_sign;
    if d.triangles.len() != expected {
        return bad(format!("{} triangles, expected {expected}", d.triangles.len()));
    }
    if d.vertices[d.start()].side != Side::Start || d.vertices[d.end].side != Side::End {
        return bad("endpoints misplaced".into());
    }
    for s in 0..d.triangles.len().saturating_sub(1) {
        if d.shared_edge(s, s + 1).is_none() {
            return bad(format!("triangles {s} and {} are not adjacent", s + 1));
        }
    }
    if d.has_labels() {
        let label = |v: VertexId| d.vertices[v].label.clone().expect("labels present");
        if label(d.start()) != ExtRational::infinity() {
            return bad("first vertex is not 1/0".into());
        }
        if label(d.end) != d.value() {
            return bad(format!("last vertex is {}, expected {}", label(d.end), d.value()));
        }
        for (ei, e) in d.edges.iter().enumerate() {
            let (a, b) = (label(e.ends.0), label(e.ends.1));
            let det = a.numer() * b.denom() - a.denom() * b.numer();
            if !det.abs().is_one() {
                return bad(format!("edge {ei} = {{{a}, {b}}} is not unimodular"));
            }
        }
        let mut labels: Vec<_> = (0..d.vertices.len()).map(label).collect();
        labels.sort_by(|a, b| (a.numer(), a.denom()).cmp(&(b.numer(), b.denom())));
        labels.dedup();
        if labels.len() != d.vertices.len() {
            return bad("two vertices share a label".into());
        }
    }
    Ok(())
}

/// Summary counts, as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramStats {
    pub triangles: usize,
    pub vertices: usize,
    pub odd_odd: usize,
    pub channels: usize,
}

impl Diagram {
    pub fn stats(&self) -> DiagramStats {
        DiagramStats {
            triangles: self.triangles.len(),
            vertices: self.vertices.len(),
            odd_odd: self.odd_odd_count(),
            channels: self.channels.len(),
        }
    }
}
