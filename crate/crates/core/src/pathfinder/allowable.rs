use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::PathError;
use crate::diagram::{ChannelId, Diagram, EdgeId, Overlay, TriangleId, VertexId};

/// One step of a path: an edge of the diagram or a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arc {
    Edge(EdgeId),
    Channel(ChannelId),
}

/// A validated path from `1/0` to `p/q`. Serializes as its arc list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowablePath {
    arcs: Vec<Arc>,
    vertices: Vec<VertexId>,
    channel_count: usize,
}

impl AllowablePath {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Visited vertices in order, from the start vertex to the end vertex.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn channel_count(&self) -> usize {
        self.channel_count
    }

    pub fn overlay(&self) -> Overlay {
        let mut o = Overlay::default();
        for a in &self.arcs {
            match *a {
                Arc::Edge(e) => o.edges.push(e),
                Arc::Channel(c) => o.channels.push(c),
            }
        }
        o
    }
}

impl Serialize for AllowablePath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.arcs)
    }
}

/// The first rule a candidate path breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    /// Arc `arc` does not leave from the vertex the path is at.
    Disconnected { arc: usize },
    RepeatedVertex { arc: usize, vertex: VertexId },
    WrongEnd { vertex: VertexId },
    /// An edge of the path is the edge some channel of the path crosses.
    CrossedEdgeUsed { edge: EdgeId, channel: ChannelId },
    /// Two path edges bound the same triangle.
    TwoEdgesInTriangle { triangle: TriangleId },
    ChannelsOverlap { first: ChannelId, second: ChannelId },
    NoChannel,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Empty => write!(f, "path has no arcs"),
            Violation::Disconnected { arc } => write!(f, "arc {arc} does not continue the path"),
            Violation::RepeatedVertex { arc, vertex } => {
                write!(f, "arc {arc} revisits vertex {vertex}")
            }
            Violation::WrongEnd { vertex } => write!(f, "path ends at vertex {vertex}, not p/q"),
            Violation::CrossedEdgeUsed { edge, channel } => {
                write!(f, "edge {edge} is crossed by channel {channel}")
            }
            Violation::TwoEdgesInTriangle { triangle } => {
                write!(f, "two path edges bound triangle {triangle}")
            }
            Violation::ChannelsOverlap { first, second } => {
                write!(f, "channels {first} and {second} cross a common triangle")
            }
            Violation::NoChannel => write!(f, "path contains no channel"),
        }
    }
}

fn check_refs(d: &Diagram, arcs: &[Arc]) -> Result<(), PathError> {
    for a in arcs {
        match *a {
            Arc::Edge(e) if e >= d.edges().len() => {
                return Err(PathError::DanglingReference { kind: "edge", id: e })
            }
            Arc::Channel(c) if c >= d.channels().len() => {
                return Err(PathError::DanglingReference { kind: "channel", id: c })
            }
            _ => {}
        }
    }
    Ok(())
}

/// Checks every allowability rule, returning the first one broken.
///
/// A path runs from `1/0` to `p/q` without revisiting a vertex and uses at
/// least one channel. Its channels cross pairwise disjoint triangle pairs,
/// none of its edges is an edge one of its channels crosses, and no triangle
/// has two of its edges on the path. Channels may meet at a shared odd/odd
/// endpoint.
pub fn is_allowable(d: &Diagram, arcs: &[Arc]) -> Result<Option<Violation>, PathError> {
    check_refs(d, arcs)?;
    Ok(trace(d, arcs).err())
}

/// Like [`is_allowable`] but returns the validated path.
pub fn validate_path(d: &Diagram, arcs: &[Arc]) -> Result<AllowablePath, PathError> {
    check_refs(d, arcs)?;
    trace(d, arcs).map_err(PathError::NotAllowable)
}

fn trace(d: &Diagram, arcs: &[Arc]) -> Result<AllowablePath, Violation> {
    if arcs.is_empty() {
        return Err(Violation::Empty);
    }
    let mut visited = FixedBitSet::with_capacity(d.vertices().len());
    let mut at = d.start();
    visited.insert(at);
    let mut vertices = vec![at];
    for (i, a) in arcs.iter().enumerate() {
        let next = match *a {
            Arc::Edge(e) => {
                let (x, y) = d.edges()[e].ends;
                if at != x && at != y {
                    return Err(Violation::Disconnected { arc: i });
                }
                d.edges()[e].other_end(at)
            }
            Arc::Channel(c) => {
                let ch = &d.channels()[c];
                if at != ch.endpoints.0 && at != ch.endpoints.1 {
                    return Err(Violation::Disconnected { arc: i });
                }
                ch.other_end(at)
            }
        };
        if visited.contains(next) {
            return Err(Violation::RepeatedVertex { arc: i, vertex: next });
        }
        visited.insert(next);
        vertices.push(next);
        at = next;
    }
    if at != d.end() {
        return Err(Violation::WrongEnd { vertex: at });
    }

    let channels: Vec<ChannelId> =
        arcs.iter().filter_map(|a| if let Arc::Channel(c) = a { Some(*c) } else { None }).collect();
    let edges: Vec<EdgeId> =
        arcs.iter().filter_map(|a| if let Arc::Edge(e) = a { Some(*e) } else { None }).collect();

    for &e in &edges {
        if let Some(&c) = channels.iter().find(|&&c| d.channels()[c].shared_edge == e) {
            return Err(Violation::CrossedEdgeUsed { edge: e, channel: c });
        }
    }
    let mut bounded = FixedBitSet::with_capacity(d.triangles().len());
    for &e in &edges {
        for &t in &d.edges()[e].triangles {
            if bounded.put(t) {
                return Err(Violation::TwoEdgesInTriangle { triangle: t });
            }
        }
    }
    let mut crossed = FixedBitSet::with_capacity(d.triangles().len());
    let mut owner = vec![usize::MAX; d.triangles().len()];
    for &c in &channels {
        let (s, t) = d.channels()[c].triangles;
        for tri in [s, t] {
            if crossed.put(tri) {
                return Err(Violation::ChannelsOverlap { first: owner[tri], second: c });
            }
            owner[tri] = c;
        }
    }
    if channels.is_empty() {
        return Err(Violation::NoChannel);
    }
    Ok(AllowablePath { channel_count: channels.len(), arcs: arcs.to_vec(), vertices })
}
