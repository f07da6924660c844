//! Closed generalized triangulations given by face pairings.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of
//! face `f` of tetrahedron `A` to tetrahedron `B` by permutation `p` sends
//! vertex `v` of `A` to vertex `p[v]` of `B`, and so face `f` onto face
//! `p[f]` of `B`.
//!
//! Text format, one record per line:
//!
//! ```text
//! # comment
//! tetrahedra 2
//! glue 0 0 1 0123
//! glue 1 0 0 0123
//! ```
//!
//! Every gluing must be listed from both sides with inverse permutations.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::homology::{AbelianGroup, IntMatrix};
use crate::quantum::{Color, TetColors};

/// Local vertex pairs of the six edges, in `TetColors` slot order
/// `(i, j, k; l, m, n)`: `i` and `l`, `j` and `m`, `k` and `n` are opposite.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

fn edge_slot(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct local vertices")
}

/// A permutation of `{0, 1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        Perm4(std::array::from_fn(|v| self.0[other.0[v] as usize]))
    }

    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    if let Some(d) = 6u8.checked_sub(a + b + c) {
                        if let Some(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    OutOfRange { line: usize, message: String },
    #[error("inconsistent gluing at tetrahedron {tet} face {face}: {message}")]
    Involution { tet: usize, face: u8, message: String },
    #[error("face {face} of tetrahedron {tet} is not glued")]
    NotClosed { tet: usize, face: u8 },
    #[error("edge {edge} of tetrahedron {tet} is identified with itself in reverse")]
    BadEdge { tet: usize, edge: usize },
    #[error("not a closed 3-manifold: {0}")]
    NotManifold(String),
    #[error("no catalog entry named {0:?}")]
    NotInCatalog(String),
}

/// Tetrahedra plus face pairings, before any validation beyond pairing
/// consistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingSpec {
    gluings: Vec<[Option<Gluing>; 4]>,
}

impl GluingSpec {
    pub fn new(tetrahedra: usize) -> Self {
        GluingSpec {
            gluings: vec![[None; 4]; tetrahedra],
        }
    }

    pub fn tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.gluings[tet][face as usize]
    }

    /// Number of glued `(tetrahedron, face)` sides.
    pub fn glued_sides(&self) -> usize {
        self.gluings.iter().flatten().filter(|g| g.is_some()).count()
    }

    /// Glues face `face` of `a` to `b` via `perm`, recording both sides.
    pub fn glue(&mut self, a: usize, face: u8, b: usize, perm: Perm4) -> Result<(), TriangulationError> {
        let n = self.tetrahedra();
        if a >= n || b >= n || face > 3 {
            return Err(TriangulationError::OutOfRange {
                line: 0,
                message: format!("gluing ({a}, {face}) -> {b} outside {n} tetrahedra"),
            });
        }
        let back_face = perm.apply(face);
        if a == b && back_face == face {
            return Err(TriangulationError::Involution {
                tet: a,
                face,
                message: "face glued to itself".into(),
            });
        }
        let fwd = Gluing { tet: b, perm };
        let bwd = Gluing {
            tet: a,
            perm: perm.inverse(),
        };
        for (t, f, g) in [(a, face, fwd), (b, back_face, bwd)] {
            if let Some(existing) = self.gluings[t][f as usize] {
                if existing != g {
                    return Err(TriangulationError::Involution {
                        tet: t,
                        face: f,
                        message: "face is already glued elsewhere".into(),
                    });
                }
            }
        }
        self.gluings[a][face as usize] = Some(fwd);
        self.gluings[b][back_face as usize] = Some(bwd);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let mut spec: Option<GluingSpec> = None;
        // (tet, face) -> (gluing, line)
        let mut records: BTreeMap<(usize, u8), (Gluing, usize)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = tokenize(line);
            let Some(&(col0, keyword)) = tokens.first() else {
                continue;
            };
            let syntax = |column: usize, message: String| TriangulationError::Syntax {
                line: line_no,
                column,
                message,
            };
            match keyword {
                "tetrahedra" => {
                    if spec.is_some() {
                        return Err(syntax(col0, "duplicate 'tetrahedra' header".into()));
                    }
                    if tokens.len() != 2 {
                        return Err(syntax(col0, "expected 'tetrahedra N'".into()));
                    }
                    let (c, tok) = tokens[1];
                    let n: usize = parse_decimal(tok).ok_or_else(|| syntax(c, format!("invalid count {tok:?}")))?;
                    if n == 0 {
                        return Err(syntax(c, "tetrahedron count must be at least 1".into()));
                    }
                    spec = Some(GluingSpec::new(n));
                }
                "glue" => {
                    let Some(s) = spec.as_ref() else {
                        return Err(syntax(col0, "'glue' before 'tetrahedra' header".into()));
                    };
                    if tokens.len() != 5 {
                        return Err(syntax(col0, "expected 'glue A f B p0p1p2p3'".into()));
                    }
                    let mut nums = [0usize; 3];
                    for (slot, &(c, tok)) in nums.iter_mut().zip(&tokens[1..4]) {
                        *slot = parse_decimal(tok).ok_or_else(|| syntax(c, format!("invalid index {tok:?}")))?;
                    }
                    let (pc, ptok) = tokens[4];
                    let perm = parse_perm(ptok).ok_or_else(|| syntax(pc, format!("invalid permutation {ptok:?}")))?;
                    let [a, f, b] = nums;
                    let n = s.tetrahedra();
                    if a >= n || b >= n {
                        return Err(TriangulationError::OutOfRange {
                            line: line_no,
                            message: format!("tetrahedron index out of range (have {n})"),
                        });
                    }
                    if f > 3 {
                        return Err(TriangulationError::OutOfRange {
                            line: line_no,
                            message: format!("face {f} out of range 0..3"),
                        });
                    }
                    let g = Gluing { tet: b, perm };
                    if records.insert((a, f as u8), (g, line_no)).is_some() {
                        return Err(TriangulationError::Involution {
                            tet: a,
                            face: f as u8,
                            message: format!("duplicate record on line {line_no}"),
                        });
                    }
                }
                other => return Err(syntax(col0, format!("unknown record {other:?}"))),
            }
        }
        let mut spec = spec.ok_or(TriangulationError::Syntax {
            line: 0,
            column: 0,
            message: "missing 'tetrahedra' header".into(),
        })?;
        for (&(a, f), &(g, line)) in &records {
            let back_face = g.perm.apply(f);
            match records.get(&(g.tet, back_face)) {
                Some((partner, _)) if partner.tet == a && partner.perm == g.perm.inverse() => {}
                Some((_, pl)) => {
                    return Err(TriangulationError::Involution {
                        tet: a,
                        face: f,
                        message: format!("record on line {line} disagrees with its partner on line {pl}"),
                    })
                }
                None => {
                    return Err(TriangulationError::Involution {
                        tet: a,
                        face: f,
                        message: format!(
                            "record on line {line} has no partner for tetrahedron {} face {back_face}",
                            g.tet
                        ),
                    })
                }
            }
            spec.glue(a, f, g.tet, g.perm)?;
        }
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tetrahedra {}\n", self.tetrahedra());
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    out.push_str(&format!("glue {t} {f} {} {}\n", g.tet, g.perm));
                }
            }
        }
        out
    }

    pub fn disjoint_union(&self, other: &GluingSpec) -> GluingSpec {
        let shift = self.tetrahedra();
        let mut gluings = self.gluings.clone();
        gluings.extend(other.gluings.iter().map(|faces| {
            faces.map(|g| {
                g.map(|g| Gluing {
                    tet: g.tet + shift,
                    perm: g.perm,
                })
            })
        }));
        GluingSpec { gluings }
    }

    /// Renumbers tetrahedron `t` as `tet_map[t]` and relabels its vertices
    /// by `vertex_maps[t]`. Describes the same triangulated space.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> GluingSpec {
        let n = self.tetrahedra();
        let mut gluings = vec![[None; 4]; n];
        for t in 0..n {
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t][f as usize] {
                    let tau = vertex_maps[t];
                    let sigma = vertex_maps[g.tet];
                    let perm = sigma.compose(&g.perm).compose(&tau.inverse());
                    gluings[tet_map[t]][tau.apply(f) as usize] = Some(Gluing {
                        tet: tet_map[g.tet],
                        perm,
                    });
                }
            }
        }
        GluingSpec { gluings }
    }
}

impl std::str::FromStr for GluingSpec {
    type Err = TriangulationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GluingSpec::parse(s)
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_decimal(tok: &str) -> Option<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

fn parse_perm(tok: &str) -> Option<Perm4> {
    let bytes = tok.as_bytes();
    if bytes.len() != 4 || !bytes.iter().all(|b| (b'0'..=b'3').contains(b)) {
        return None;
    }
    Perm4::new(std::array::from_fn(|i| bytes[i] - b'0'))
}

/// An edge of the quotient complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    /// Vertex classes at the tail and head of the canonical direction.
    pub tail: usize,
    pub head: usize,
    /// `(tetrahedron, slot)` occurrences.
    pub occurrences: Vec<(usize, usize)>,
}

/// A face of the quotient complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceClass {
    /// The two `(tetrahedron, face)` sides.
    pub sides: [(usize, u8); 2],
    /// Quotient edges of the face.
    pub edges: [usize; 3],
    /// Oriented boundary as `(edge, ±1)` terms.
    pub boundary: [(usize, i64); 3],
}

/// A validated closed triangulation with its quotient cells and the
/// incidence tables used by the state sum.
#[derive(Debug, Clone)]
pub struct Triangulation {
    spec: GluingSpec,
    num_vertices: usize,
    edges: Vec<EdgeClass>,
    faces: Vec<FaceClass>,
    tet_edges: Vec<[usize; 6]>,
    tet_faces: Vec<[usize; 4]>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    pub fn build(spec: &GluingSpec) -> Result<Self, TriangulationError> {
        let n = spec.tetrahedra();
        for t in 0..n {
            for f in 0..4u8 {
                match spec.gluing(t, f) {
                    None => return Err(TriangulationError::NotClosed { tet: t, face: f }),
                    Some(g) if g.tet == t && g.perm.apply(f) == f => {
                        return Err(TriangulationError::NotManifold(format!(
                            "face {f} of tetrahedron {t} is glued to itself"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }

        // vertices
        let mut vuf = UnionFind::new(4 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let g = spec.gluing(t, f).expect("closed");
                for v in (0..4u8).filter(|&v| v != f) {
                    vuf.union(4 * t + v as usize, 4 * g.tet + g.perm.apply(v) as usize);
                }
            }
        }
        let mut vertex_index = BTreeMap::new();
        let mut vertex_of = vec![0usize; 4 * n];
        for (x, slot) in vertex_of.iter_mut().enumerate() {
            let root = vuf.find(x);
            let next = vertex_index.len();
            *slot = *vertex_index.entry(root).or_insert(next);
        }
        let num_vertices = vertex_index.len();

        // edges, with orientation parity relative to the class representative
        let mut edge_of = vec![usize::MAX; 6 * n];
        let mut parity = vec![false; 6 * n];
        let mut edges = Vec::new();
        for start in 0..6 * n {
            if edge_of[start] != usize::MAX {
                continue;
            }
            let id = edges.len();
            edge_of[start] = id;
            let mut occurrences = vec![(start / 6, start % 6)];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let (t, slot) = (x / 6, x % 6);
                let (a, b) = EDGE_VERTICES[slot];
                for f in (0..4u8).filter(|&f| f != a && f != b) {
                    let g = spec.gluing(t, f).expect("closed");
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    let y = 6 * g.tet + edge_slot(pa, pb);
                    let p = parity[x] ^ (pa > pb);
                    if edge_of[y] == usize::MAX {
                        edge_of[y] = id;
                        parity[y] = p;
                        occurrences.push((y / 6, y % 6));
                        stack.push(y);
                    } else if parity[y] != p {
                        return Err(TriangulationError::BadEdge { tet: t, edge: slot });
                    }
                }
            }
            let (t, slot) = (start / 6, start % 6);
            let (a, b) = EDGE_VERTICES[slot];
            occurrences.sort_unstable();
            edges.push(EdgeClass {
                tail: vertex_of[4 * t + a as usize],
                head: vertex_of[4 * t + b as usize],
                occurrences,
            });
        }

        // faces
        let mut face_of = vec![usize::MAX; 4 * n];
        let mut faces = Vec::new();
        for t in 0..n {
            for f in 0..4u8 {
                if face_of[4 * t + f as usize] != usize::MAX {
                    continue;
                }
                let g = spec.gluing(t, f).expect("closed");
                let other = (g.tet, g.perm.apply(f));
                let id = faces.len();
                face_of[4 * t + f as usize] = id;
                face_of[4 * other.0 + other.1 as usize] = id;
                let vs: Vec<u8> = (0..4u8).filter(|&v| v != f).collect();
                let term = |a: u8, b: u8, sign: i64| {
                    let x = 6 * t + edge_slot(a, b);
                    (edge_of[x], if parity[x] { -sign } else { sign })
                };
                let boundary = [term(vs[0], vs[1], 1), term(vs[1], vs[2], 1), term(vs[0], vs[2], -1)];
                faces.push(FaceClass {
                    sides: [(t, f), other],
                    edges: [boundary[0].0, boundary[2].0, boundary[1].0],
                    boundary,
                });
            }
        }

        let tet_edges: Vec<[usize; 6]> = (0..n).map(|t| std::array::from_fn(|s| edge_of[6 * t + s])).collect();
        let tet_faces: Vec<[usize; 4]> = (0..n).map(|t| std::array::from_fn(|f| face_of[4 * t + f])).collect();

        let tri = Triangulation {
            spec: spec.clone(),
            num_vertices,
            edges,
            faces,
            tet_edges,
            tet_faces,
        };
        tri.check_vertex_links(&vertex_of)?;
        if tri.euler_characteristic() != 0 {
            return Err(TriangulationError::NotManifold(format!(
                "Euler characteristic is {}",
                tri.euler_characteristic()
            )));
        }
        Ok(tri)
    }

    // The link of a vertex class is assembled from corner triangles glued
    // along face pairings, so it is connected and closed; it is a sphere
    // exactly when its Euler characteristic is 2.
    fn check_vertex_links(&self, vertex_of: &[usize]) -> Result<(), TriangulationError> {
        let mut corners = vec![0i64; self.num_vertices];
        for &v in vertex_of {
            corners[v] += 1;
        }
        let mut ends = vec![0i64; self.num_vertices];
        for e in &self.edges {
            ends[e.tail] += 1;
            ends[e.head] += 1;
        }
        for v in 0..self.num_vertices {
            // V - E + F with E = 3F/2
            let chi = ends[v] - corners[v] * 3 / 2 + corners[v];
            if chi != 2 {
                return Err(TriangulationError::NotManifold(format!(
                    "link of vertex {v} has Euler characteristic {chi}"
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &GluingSpec {
        &self.spec
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.tet_edges.len()
    }

    pub fn edges(&self) -> &[EdgeClass] {
        &self.edges
    }

    pub fn faces(&self) -> &[FaceClass] {
        &self.faces
    }

    /// Quotient edges of tetrahedron `t` in `TetColors` slot order.
    pub fn tet_edges(&self, t: usize) -> [usize; 6] {
        self.tet_edges[t]
    }

    pub fn tet_faces(&self, t: usize) -> [usize; 4] {
        self.tet_faces[t]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64 - self.num_tetrahedra() as i64
    }

    pub fn tet_colors(&self, t: usize, coloring: &[Color]) -> TetColors {
        TetColors(self.tet_edges[t].map(|e| coloring[e]))
    }

    /// `(v, t, f)`: tetrahedra containing an odd-colored edge, faces
    /// containing an odd-colored edge, and odd-colored edges.
    pub fn counts_for_coloring(&self, coloring: &[Color]) -> (usize, usize, usize) {
        let odd = |e: &usize| coloring[*e] % 2 == 1;
        let v = self.tet_edges.iter().filter(|es| es.iter().any(odd)).count();
        let t = self.faces.iter().filter(|fc| fc.edges.iter().any(odd)).count();
        let f = coloring.iter().filter(|&&c| c % 2 == 1).count();
        (v, t, f)
    }

    /// First homology from the cellular boundary maps.
    pub fn homology_h1(&self) -> AbelianGroup {
        let ne = self.num_edges();
        let mut d1 = IntMatrix::zeros(self.num_vertices, ne);
        for (e, ec) in self.edges.iter().enumerate() {
            d1.add(ec.head, e, 1);
            d1.add(ec.tail, e, -1);
        }
        let mut d2 = IntMatrix::zeros(ne, self.num_faces());
        for (fi, fc) in self.faces.iter().enumerate() {
            for &(e, s) in &fc.boundary {
                d2.add(e, fi, s);
            }
        }
        AbelianGroup::homology(&d1, &d2)
    }
}

/// Two tetrahedra glued by the identity on every face: the double of a
/// 3-simplex, a triangulation of `S³` with 4 vertices.
pub fn doubled_tetrahedron() -> GluingSpec {
    let mut spec = GluingSpec::new(2);
    for f in 0..4 {
        spec.glue(0, f, 1, Perm4::IDENTITY).expect("fresh faces");
    }
    spec
}

/// The boundary of the 4-simplex: a 5-tetrahedron, 5-vertex `S³`.
pub fn simplex_boundary() -> GluingSpec {
    // tetrahedron t omits global vertex t; local vertices are the remaining
    // global vertices in increasing order
    let locals: Vec<Vec<u8>> = (0..5u8).map(|t| (0..5u8).filter(|&v| v != t).collect()).collect();
    let mut spec = GluingSpec::new(5);
    for t in 0..5usize {
        for f in 0..4u8 {
            let missing = locals[t][f as usize];
            let other = missing as usize;
            let images: [u8; 4] = std::array::from_fn(|v| {
                let global = if v as u8 == f { t as u8 } else { locals[t][v] };
                locals[other].iter().position(|&g| g == global).expect("shared vertex") as u8
            });
            let perm = Perm4::new(images).expect("bijection");
            if t < other {
                spec.glue(t, f, other, perm).expect("consistent");
            }
        }
    }
    spec
}

/// `L(p, q)` as `p` tetrahedra around a common axis: the double cone over
/// a `p`-gon, upper face `k` identified with lower face `k + q`.
///
/// Tetrahedron `k` has local vertices `0 = N`, `1 = S`, `2 = a_k`,
/// `3 = a_{k+1}`.
pub fn lens_double_cone(p: usize, q: usize) -> GluingSpec {
    assert!(p >= 2, "need at least two tetrahedra");
    let mut spec = GluingSpec::new(p);
    let around = Perm4::new([0, 1, 3, 2]).expect("valid");
    let twist = Perm4::new([1, 0, 2, 3]).expect("valid");
    for k in 0..p {
        spec.glue(k, 2, (k + 1) % p, around).expect("consistent");
        spec.glue(k, 1, (k + q) % p, twist).expect("consistent");
    }
    spec
}
