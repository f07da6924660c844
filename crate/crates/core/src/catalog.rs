//! Builtin triangulations.

use std::cmp::Ordering;

use crate::homology::AbelianGroup;
use crate::triangulation::{
    doubled_tetrahedron, lens_double_cone, simplex_boundary, GluingSpec, Triangulation, TriangulationError,
};

#[derive(Debug, Clone, Copy)]
enum Source {
    Doubled,
    SimplexBoundary,
    Fixture(&'static str),
    DoubleCone(usize, usize),
}

/// A named builtin manifold.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
    /// Torsion coefficients of the expected first homology.
    pub expected_torsion: &'static [u64],
    source: Source,
}

impl CatalogEntry {
    pub fn spec(&self) -> GluingSpec {
        match self.source {
            Source::Doubled => doubled_tetrahedron(),
            Source::SimplexBoundary => simplex_boundary(),
            Source::Fixture(text) => GluingSpec::parse(text).expect("builtin fixture parses"),
            Source::DoubleCone(p, q) => lens_double_cone(p, q),
        }
    }

    pub fn triangulation(&self) -> Result<Triangulation, TriangulationError> {
        Triangulation::build(&self.spec())
    }

    pub fn expected_h1(&self) -> AbelianGroup {
        AbelianGroup {
            rank: 0,
            torsion: self.expected_torsion.to_vec(),
        }
    }
}

macro_rules! fixture {
    ($file:literal) => {
        Source::Fixture(include_str!(concat!("../fixtures/", $file)))
    };
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "S3",
        aliases: &["S^3", "sphere"],
        description: "two tetrahedra glued by the identity on every face",
        expected_torsion: &[],
        source: Source::Doubled,
    },
    CatalogEntry {
        name: "S3-simplex",
        aliases: &["S3-4simplex", "S3-pentachoron"],
        description: "boundary of the 4-simplex",
        expected_torsion: &[],
        source: Source::SimplexBoundary,
    },
    CatalogEntry {
        name: "RP3",
        aliases: &["L(2,1)", "RP^3"],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[2],
        source: fixture!("rp3.tri"),
    },
    CatalogEntry {
        name: "L(3,1)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[3],
        source: fixture!("l3_1.tri"),
    },
    CatalogEntry {
        name: "L(4,1)",
        aliases: &[],
        description: "one tetrahedron, faces paired in two folds",
        expected_torsion: &[4],
        source: fixture!("l4_1.tri"),
    },
    CatalogEntry {
        name: "L(5,1)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[5],
        source: fixture!("l5_1.tri"),
    },
    CatalogEntry {
        name: "L(5,2)",
        aliases: &[],
        description: "one tetrahedron, faces paired in two folds",
        expected_torsion: &[5],
        source: fixture!("l5_2.tri"),
    },
    CatalogEntry {
        name: "L(6,1)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[6],
        source: fixture!("l6_1.tri"),
    },
    CatalogEntry {
        name: "L(7,2)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[7],
        source: fixture!("l7_2.tri"),
    },
    CatalogEntry {
        name: "L(8,3)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[8],
        source: fixture!("l8_3.tri"),
    },
    CatalogEntry {
        name: "L(9,2)",
        aliases: &[],
        description: "double cone over a 9-gon",
        expected_torsion: &[9],
        source: Source::DoubleCone(9, 2),
    },
    CatalogEntry {
        name: "L(10,3)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[10],
        source: fixture!("l10_3.tri"),
    },
    CatalogEntry {
        name: "L(11,4)",
        aliases: &[],
        description: "double cone over an 11-gon",
        expected_torsion: &[11],
        source: Source::DoubleCone(11, 4),
    },
    CatalogEntry {
        name: "L(12,5)",
        aliases: &[],
        description: "layered solid torus folded along its boundary",
        expected_torsion: &[12],
        source: fixture!("l12_5.tri"),
    },
    CatalogEntry {
        name: "L(13,5)",
        aliases: &[],
        description: "double cone over a 13-gon",
        expected_torsion: &[13],
        source: Source::DoubleCone(13, 5),
    },
    CatalogEntry {
        name: "S3/Q8",
        aliases: &["quaternionic-8"],
        description: "two tetrahedra, one vertex",
        expected_torsion: &[2, 2],
        source: fixture!("s3_q8.tri"),
    },
    CatalogEntry {
        name: "S3/Q12",
        aliases: &["quaternionic-12"],
        description: "three tetrahedra, one vertex",
        expected_torsion: &[4],
        source: fixture!("s3_q12.tri"),
    },
];

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Compares names with embedded numbers in numeric order.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.chars().peekable(), b.chars().peekable());
    loop {
        match (x.peek().copied(), y.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(c) = x.next_if(char::is_ascii_digit) {
                    n.push(c);
                }
                let mut m = String::new();
                while let Some(d) = y.next_if(char::is_ascii_digit) {
                    m.push(d);
                }
                let ord = n.len().cmp(&m.len()).then(n.cmp(&m));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(&d);
                }
                x.next();
                y.next();
            }
        }
    }
}

/// All builtin entries in alphabetical order, numbers compared by value.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut v = ENTRIES.to_vec();
    v.sort_by(|a, b| natural_cmp(a.name, b.name));
    v
}

/// Finds an entry by name or alias, ignoring case and punctuation, so
/// `L31` and `l(3, 1)` both name `L(3,1)`.
pub fn lookup(name: &str) -> Result<CatalogEntry, TriangulationError> {
    let key = normalize(name);
    ENTRIES
        .iter()
        .find(|e| normalize(e.name) == key || e.aliases.iter().any(|a| normalize(a) == key))
        .cloned()
        .ok_or_else(|| TriangulationError::NotInCatalog(name.to_string()))
}
