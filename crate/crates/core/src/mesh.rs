//! Unstructured conforming 2D triangle meshes with uniform (red) refinement
//! and newest-vertex-bisection adaptive refinement.
//!
//! Meshes are immutable values: refinement returns a new mesh together with a
//! [`ParentMap`] that relates fine triangles and vertices to the coarse mesh.
//! The parent map is what makes coarse/fine space pairs nested and lets the
//! estimator aggregate fine-element indicators onto coarse elements.
//!
//! Local edge convention: edge `i` of a triangle is the edge opposite local
//! vertex `i`, i.e. it connects local vertices `(i+1)%3` and `(i+2)%3`.
//! `refinement_edge` stores the local index of the edge opposite the newest
//! vertex; a bisected triangle's children both get the inserted midpoint as
//! their newest vertex.

use std::collections::HashMap;

use crate::{Error, Result};

/// A point of the computational domain: `(x, y)` for the Poisson problem,
/// `(x, t)` for the space-time problems.
pub type Point = [f64; 2];

/// Triangle as an index triple into the mesh vertices, counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub vertices: [usize; 3],
    /// Local index of the edge opposite the newest vertex.
    pub refinement_edge: u8,
    pub region_tag: i32,
}

impl Triangle {
    /// Vertex pair of local edge `e` (the edge opposite local vertex `e`).
    pub fn edge(&self, e: u8) -> (usize, usize) {
        let e = e as usize;
        (self.vertices[(e + 1) % 3], self.vertices[(e + 2) % 3])
    }
}

/// Sides of the domain boundary. Every boundary edge of a mesh carries one;
/// essential boundary conditions select tags through
/// [`crate::space::BcSelector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Left,
    Right,
    Bottom,
    Top,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [
        BoundaryTag::Left,
        BoundaryTag::Right,
        BoundaryTag::Bottom,
        BoundaryTag::Top,
    ];
}

impl std::fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundaryTag::Left => "left",
            BoundaryTag::Right => "right",
            BoundaryTag::Bottom => "bottom",
            BoundaryTag::Top => "top",
        };
        f.write_str(s)
    }
}

/// An edge of the domain boundary with its side tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
}

/// Conforming triangulation.
#[derive(Clone, Debug)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<Triangle>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Number of refinement calls this mesh is away from its initial mesh.
    pub generation: u32,
}

/// Origin of a fine vertex relative to the coarse mesh of a [`ParentMap`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Inherited coarse vertex (same coordinates, coarse id).
    Coarse(usize),
    /// Midpoint of the coarse edge with these endpoint ids.
    EdgeMidpoint(usize, usize),
}

/// Relates one refinement step's output to its input mesh.
#[derive(Clone, Debug)]
pub struct ParentMap {
    /// For every fine triangle, the coarse triangle containing it.
    pub child_to_parent: Vec<usize>,
    /// For every fine vertex, where it came from.
    pub vertex_origin: Vec<VertexOrigin>,
}

impl ParentMap {
    /// Maps a fine triangle id through a chain of refinements back to the
    /// root mesh the first map refines.
    pub fn trace_to_root(chain: &[ParentMap], mut fine_tri: usize) -> usize {
        for pm in chain.iter().rev() {
            fine_tri = pm.child_to_parent[fine_tri];
        }
        fine_tri
    }
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TriMesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_coords(&self, t: usize) -> [Point; 3] {
        let v = self.triangles[t].vertices;
        [self.vertices[v[0]], self.vertices[v[1]], self.vertices[v[2]]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_coords(t);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle_area(t)).sum()
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.n_triangles() {
            let p = self.triangle_coords(t);
            for i in 0..3 {
                let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let dot = u[0] * v[0] + u[1] * v[1];
                let angle = (dot / (dist(a, b) * dist(a, c))).clamp(-1.0, 1.0).acos();
                min = min.min(angle);
            }
        }
        min
    }

    /// Tags present among the boundary edges.
    pub fn boundary_tags(&self) -> Vec<BoundaryTag> {
        let mut tags: Vec<BoundaryTag> = self.boundary_edges.iter().map(|e| e.tag).collect();
        tags.sort();
        tags.dedup();
        tags
    }

    /// All undirected edges in first-seen order plus per-triangle local-edge
    /// ids into that list.
    fn edge_registry(&self) -> (Vec<(usize, usize)>, Vec<[usize; 3]>) {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tri_edges = vec![[0usize; 3]; self.n_triangles()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for e in 0..3u8 {
                let (a, b) = tri.edge(e);
                let key = edge_key(a, b);
                let id = *index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
                tri_edges[t][e as usize] = id;
            }
        }
        (edges, tri_edges)
    }

    /// Checks conformity, orientation, and boundary closure. Used by tests
    /// and by the mesh constructors in debug builds.
    pub fn validate(&self) -> Result<()> {
        for (i, &p) in self.vertices.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::InvalidInput(format!("vertex {i} not finite")));
            }
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.vertices;
            if a == b || b == c || a == c {
                return Err(Error::InvalidInput(format!("triangle {t} repeats a vertex")));
            }
            if self.triangle_area(t) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "triangle {t} is not counterclockwise"
                )));
            }
        }
        let (edges, tri_edges) = self.edge_registry();
        let mut use_count = vec![0usize; edges.len()];
        for te in &tri_edges {
            for &e in te {
                use_count[e] += 1;
            }
        }
        let mut boundary_lookup: HashMap<(usize, usize), usize> = HashMap::new();
        for be in &self.boundary_edges {
            *boundary_lookup
                .entry(edge_key(be.vertices[0], be.vertices[1]))
                .or_insert(0) += 1;
        }
        for (e, &(a, b)) in edges.iter().enumerate() {
            let on_boundary = boundary_lookup.get(&(a, b)).copied().unwrap_or(0);
            match (use_count[e], on_boundary) {
                (2, 0) => {}
                (1, 1) => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "edge ({a}, {b}) used by {} triangles, listed {} times as boundary",
                        use_count[e], on_boundary
                    )));
                }
            }
        }
        if boundary_lookup.len() != self.boundary_edges.len() {
            return Err(Error::InvalidInput("duplicate boundary edge".into()));
        }
        // closed loops: every boundary vertex has exactly two incident boundary edges
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for be in &self.boundary_edges {
            *degree.entry(be.vertices[0]).or_insert(0) += 1;
            *degree.entry(be.vertices[1]).or_insert(0) += 1;
        }
        if degree.values().any(|&d| d != 2) {
            return Err(Error::InvalidInput("boundary edges do not form closed loops".into()));
        }
        Ok(())
    }

    /// Barycentric coordinates of `p` with respect to triangle `t`.
    pub fn barycentric(&self, t: usize, p: Point) -> [f64; 3] {
        let [a, b, c] = self.triangle_coords(t);
        let total = signed_area(a, b, c);
        [
            signed_area(p, b, c) / total,
            signed_area(a, p, c) / total,
            signed_area(a, b, p) / total,
        ]
    }
}

/// Local index of the longest edge, ties broken by the lowest index.
fn longest_edge(coords: &[Point; 3]) -> u8 {
    let mut best = 0u8;
    let mut best_len = -1.0;
    for e in 0..3u8 {
        let len = dist(
            coords[(e as usize + 1) % 3],
            coords[(e as usize + 2) % 3],
        );
        if len > best_len {
            best_len = len;
            best = e;
        }
    }
    best
}

/// Structured triangulation of `x_range × y_range` with `nx × ny` cells, each
/// split along the diagonal from its lower-left to its upper-right corner.
/// Boundary edges are tagged by side; refinement edges are the longest edges
/// (the diagonals), which makes the initial mesh NVB-compatible.
pub fn make_rect_mesh(
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<TriMesh> {
    if !(x_range.1 > x_range.0) || !(y_range.1 > y_range.0) {
        return Err(Error::InvalidInput("degenerate interval".into()));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("grid dimensions must be at least 1".into()));
    }
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = x0 + (x1 - x0) * i as f64 / nx as f64;
            let y = y0 + (y1 - y0) * j as f64 / ny as f64;
            vertices.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (ll, lr) = (vid(i, j), vid(i + 1, j));
            let (ul, ur) = (vid(i, j + 1), vid(i + 1, j + 1));
            // diagonal ll-ur is the longest edge of both triangles
            for verts in [[ll, lr, ur], [ll, ur, ul]] {
                let coords = [vertices[verts[0]], vertices[verts[1]], vertices[verts[2]]];
                triangles.push(Triangle {
                    vertices: verts,
                    refinement_edge: longest_edge(&coords),
                    region_tag: 0,
                });
            }
        }
    }
    let mut boundary_edges = Vec::new();
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, 0), vid(i + 1, 0)],
            tag: BoundaryTag::Bottom,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(i, ny), vid(i + 1, ny)],
            tag: BoundaryTag::Top,
        });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(0, j), vid(0, j + 1)],
            tag: BoundaryTag::Left,
        });
        boundary_edges.push(BoundaryEdge {
            vertices: [vid(nx, j), vid(nx, j + 1)],
            tag: BoundaryTag::Right,
        });
    }
    let mesh = TriMesh {
        vertices,
        triangles,
        boundary_edges,
        generation: 0,
    };
    debug_assert!(mesh.validate().is_ok());
    Ok(mesh)
}

/// Six-triangle triangulation of the L-shaped domain
/// `(-1,1)² \ ([0,1] × [-1,0])` with a vertex at the reentrant corner.
/// Boundary tags follow the outward normal of each side.
pub fn make_lshape_mesh() -> TriMesh {
    let vertices: Vec<Point> = vec![
        [-1.0, -1.0], // 0
        [0.0, -1.0],  // 1
        [-1.0, 0.0],  // 2
        [0.0, 0.0],   // 3 reentrant corner
        [1.0, 0.0],   // 4
        [-1.0, 1.0],  // 5
        [0.0, 1.0],   // 6
        [1.0, 1.0],   // 7
    ];
    // one square per quadrant of the domain, each split along its ll-ur diagonal
    let quads = [[0, 1, 3, 2], [2, 3, 6, 5], [3, 4, 7, 6]];
    let mut triangles = Vec::with_capacity(6);
    for [ll, lr, ur, ul] in quads {
        for verts in [[ll, lr, ur], [ll, ur, ul]] {
            let coords = [vertices[verts[0]], vertices[verts[1]], vertices[verts[2]]];
            triangles.push(Triangle {
                vertices: verts,
                refinement_edge: longest_edge(&coords),
                region_tag: 0,
            });
        }
    }
    let boundary_edges = vec![
        BoundaryEdge { vertices: [0, 1], tag: BoundaryTag::Bottom },
        BoundaryEdge { vertices: [1, 3], tag: BoundaryTag::Right },
        BoundaryEdge { vertices: [3, 4], tag: BoundaryTag::Bottom },
        BoundaryEdge { vertices: [4, 7], tag: BoundaryTag::Right },
        BoundaryEdge { vertices: [5, 7], tag: BoundaryTag::Top },
        BoundaryEdge { vertices: [2, 5], tag: BoundaryTag::Left },
        BoundaryEdge { vertices: [0, 2], tag: BoundaryTag::Left },
    ];
    // split the top boundary edge 5-7 at vertex 6
    let mut boundary_edges: Vec<BoundaryEdge> = boundary_edges
        .into_iter()
        .flat_map(|be| {
            if be.vertices == [5, 7] {
                vec![
                    BoundaryEdge { vertices: [5, 6], tag: BoundaryTag::Top },
                    BoundaryEdge { vertices: [6, 7], tag: BoundaryTag::Top },
                ]
            } else {
                vec![be]
            }
        })
        .collect();
    boundary_edges.sort_by_key(|be| be.vertices);
    let mesh = TriMesh {
        vertices,
        triangles,
        boundary_edges,
        generation: 0,
    };
    debug_assert!(mesh.validate().is_ok());
    mesh
}

/// Red refinement: every triangle is replaced by four similar children via
/// its edge midpoints. Children keep the parent's region tag and get
/// longest-edge refinement edges.
pub fn uniform_refine(mesh: &TriMesh) -> (TriMesh, ParentMap) {
    let (edges, tri_edges) = mesh.edge_registry();
    let n_old = mesh.n_vertices();
    let mut vertices = mesh.vertices.clone();
    let mut vertex_origin: Vec<VertexOrigin> = (0..n_old).map(VertexOrigin::Coarse).collect();
    let mut edge_midpoint = vec![0usize; edges.len()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        edge_midpoint[e] = vertices.len();
        vertices.push(midpoint(mesh.vertices[a], mesh.vertices[b]));
        vertex_origin.push(VertexOrigin::EdgeMidpoint(a, b));
    }

    let mut triangles = Vec::with_capacity(4 * mesh.n_triangles());
    let mut child_to_parent = Vec::with_capacity(4 * mesh.n_triangles());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [v0, v1, v2] = tri.vertices;
        // midpoint m_i sits on edge i (opposite vertex i)
        let m0 = edge_midpoint[tri_edges[t][0]];
        let m1 = edge_midpoint[tri_edges[t][1]];
        let m2 = edge_midpoint[tri_edges[t][2]];
        for verts in [[v0, m2, m1], [m2, v1, m0], [m1, m0, v2], [m0, m1, m2]] {
            let coords = [vertices[verts[0]], vertices[verts[1]], vertices[verts[2]]];
            triangles.push(Triangle {
                vertices: verts,
                refinement_edge: longest_edge(&coords),
                region_tag: tri.region_tag,
            });
            child_to_parent.push(t);
        }
    }

    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, &key) in edges.iter().enumerate() {
        edge_index.insert(key, e);
    }
    let mut boundary_edges = Vec::with_capacity(2 * mesh.boundary_edges.len());
    for be in &mesh.boundary_edges {
        let [a, b] = be.vertices;
        let m = edge_midpoint[edge_index[&edge_key(a, b)]];
        boundary_edges.push(BoundaryEdge { vertices: [a, m], tag: be.tag });
        boundary_edges.push(BoundaryEdge { vertices: [m, b], tag: be.tag });
    }

    let fine = TriMesh {
        vertices,
        triangles,
        boundary_edges,
        generation: mesh.generation + 1,
    };
    debug_assert!(fine.validate().is_ok());
    (
        fine,
        ParentMap {
            child_to_parent,
            vertex_origin,
        },
    )
}

/// Applies `uniform_refine` `times` times, returning the final mesh and the
/// chain of parent maps from coarsest to finest.
pub fn uniform_refine_times(mesh: &TriMesh, times: usize) -> (TriMesh, Vec<ParentMap>) {
    let mut current = mesh.clone();
    let mut chain = Vec::with_capacity(times);
    for _ in 0..times {
        let (next, pm) = uniform_refine(&current);
        current = next;
        chain.push(pm);
    }
    (current, chain)
}

/// Newest vertex bisection of the marked triangles with iterative conforming
/// closure. An empty marked set returns an identical mesh.
pub fn bisect(mesh: &TriMesh, marked: &[usize]) -> (TriMesh, ParentMap) {
    for &t in marked {
        assert!(t < mesh.n_triangles(), "marked triangle {t} out of range");
    }
    let (edges, tri_edges) = mesh.edge_registry();
    let ref_edge_of =
        |t: usize| tri_edges[t][mesh.triangles[t].refinement_edge as usize];

    // mark refinement edges of marked triangles, then close: any triangle
    // with a marked edge must have its refinement edge marked as well
    let mut edge_marked = vec![false; edges.len()];
    for &t in marked {
        edge_marked[ref_edge_of(t)] = true;
    }
    loop {
        let mut changed = false;
        for t in 0..mesh.n_triangles() {
            if tri_edges[t].iter().any(|&e| edge_marked[e]) && !edge_marked[ref_edge_of(t)] {
                edge_marked[ref_edge_of(t)] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let n_old = mesh.n_vertices();
    let mut vertices = mesh.vertices.clone();
    let mut vertex_origin: Vec<VertexOrigin> = (0..n_old).map(VertexOrigin::Coarse).collect();
    let mut edge_midpoint: Vec<Option<usize>> = vec![None; edges.len()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        if edge_marked[e] {
            edge_midpoint[e] = Some(vertices.len());
            vertices.push(midpoint(mesh.vertices[a], mesh.vertices[b]));
            vertex_origin.push(VertexOrigin::EdgeMidpoint(a, b));
        }
    }

    let mut triangles = Vec::new();
    let mut child_to_parent = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let r = tri.refinement_edge as usize;
        let ref_mid = edge_midpoint[tri_edges[t][r]];
        if ref_mid.is_none() {
            debug_assert!(tri_edges[t].iter().all(|&e| !edge_marked[e]));
            triangles.push(*tri);
            child_to_parent.push(t);
            continue;
        }
        let m = ref_mid.unwrap();
        // peak vertex vr is opposite the refinement edge (va, vb)
        let vr = tri.vertices[r];
        let va = tri.vertices[(r + 1) % 3];
        let vb = tri.vertices[(r + 2) % 3];
        // first bisection: children (vr, va, m) and (vr, m, vb), the newest
        // vertex m opposite the remaining full parent edge of each child
        let children = [
            ([vr, va, m], tri_edges[t][(r + 2) % 3]), // full edge (vr, va)
            ([vr, m, vb], tri_edges[t][(r + 1) % 3]), // full edge (vb, vr)
        ];
        for (verts, parent_edge) in children {
            match edge_midpoint[parent_edge] {
                None => {
                    // child's refinement edge is the full parent edge, i.e.
                    // the local edge opposite the newest vertex m
                    let ref_local = verts.iter().position(|&v| v == m).unwrap() as u8;
                    triangles.push(Triangle {
                        vertices: verts,
                        refinement_edge: ref_local,
                        region_tag: tri.region_tag,
                    });
                    child_to_parent.push(t);
                }
                Some(m2) => {
                    // second bisection at the full parent edge: rotate so the
                    // newest vertex m is the peak, preserving orientation
                    let (peak, ea, eb) = if verts[0] == m {
                        (verts[0], verts[1], verts[2])
                    } else if verts[1] == m {
                        (verts[1], verts[2], verts[0])
                    } else {
                        (verts[2], verts[0], verts[1])
                    };
                    for gverts in [[peak, ea, m2], [peak, m2, eb]] {
                        let ref_local = gverts.iter().position(|&v| v == m2).unwrap() as u8;
                        triangles.push(Triangle {
                            vertices: gverts,
                            refinement_edge: ref_local,
                            region_tag: tri.region_tag,
                        });
                        child_to_parent.push(t);
                    }
                }
            }
        }
    }

    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, &key) in edges.iter().enumerate() {
        edge_index.insert(key, e);
    }
    let mut boundary_edges = Vec::new();
    for be in &mesh.boundary_edges {
        let [a, b] = be.vertices;
        match edge_midpoint[edge_index[&edge_key(a, b)]] {
            Some(m) => {
                boundary_edges.push(BoundaryEdge { vertices: [a, m], tag: be.tag });
                boundary_edges.push(BoundaryEdge { vertices: [m, b], tag: be.tag });
            }
            None => boundary_edges.push(*be),
        }
    }

    let fine = TriMesh {
        vertices,
        triangles,
        boundary_edges,
        generation: mesh.generation + 1,
    };
    debug_assert!(fine.validate().is_ok());
    (
        fine,
        ParentMap {
            child_to_parent,
            vertex_origin,
        },
    )
}

/// Renders the mesh as an SVG document: one `<polygon>` per triangle, viewBox
/// equal to the bounding box, stroke width 0.2% of the bounding-box diagonal.
pub fn to_svg(mesh: &TriMesh) -> String {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &[x, y] in &mesh.vertices {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let (w, h) = (max_x - min_x, max_y - min_y);
    let stroke = 0.002 * (w * w + h * h).sqrt();
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x} {min_y} {w} {h}\">\n"
    ));
    for t in 0..mesh.n_triangles() {
        let [a, b, c] = mesh.triangle_coords(t);
        svg.push_str(&format!(
            "<polygon points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke}\"/>\n",
            a[0], a[1], b[0], b[1], c[0], c[1]
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
