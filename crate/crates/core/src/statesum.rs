//! Admissible colorings, their exact weights, and the normalized
//! summand invariants.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::{CycloField, FieldElement, FieldError, QPolynomial};
use crate::quantum::{admissible, Color, QuantumError, QuantumKernel, TetColors};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateSumError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which of `u = ζ²` and `u = -ζ²` a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evaluation {
    Standard,
    Mirror,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluation::Standard => "q",
            Evaluation::Mirror => "-q",
        })
    }
}

/// The evaluation point together with its precomputed quantum data.
#[derive(Debug, Clone)]
pub struct QSpec {
    kernel: QuantumKernel,
    evaluation: Evaluation,
}

impl QSpec {
    pub fn new(field: &CycloField, evaluation: Evaluation) -> Result<Self, StateSumError> {
        let kernel = match evaluation {
            Evaluation::Standard => QuantumKernel::standard(field)?,
            Evaluation::Mirror => QuantumKernel::mirror(field)?,
        };
        Ok(QSpec { kernel, evaluation })
    }

    pub fn standard(r: u32) -> Result<Self, StateSumError> {
        Self::new(&CycloField::new(r)?, Evaluation::Standard)
    }

    pub fn mirror(r: u32) -> Result<Self, StateSumError> {
        Self::new(&CycloField::new(r)?, Evaluation::Mirror)
    }

    pub fn r(&self) -> u32 {
        self.kernel.r()
    }

    pub fn u(&self) -> &FieldElement {
        self.kernel.u()
    }

    pub fn is_primitive(&self) -> bool {
        self.kernel.is_primitive()
    }

    pub fn evaluation(&self) -> Evaluation {
        self.evaluation
    }

    pub fn kernel(&self) -> &QuantumKernel {
        &self.kernel
    }

    pub fn field(&self) -> &CycloField {
        self.kernel.field()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdmClass {
    Adm0,
    Adm1,
    AdmENonzero,
}

/// Classifies an admissible coloring by the parities of its colors.
pub fn classify(tri: &Triangulation, coloring: &[Color]) -> AdmClass {
    if coloring.iter().all(|c| c % 2 == 0) {
        return AdmClass::Adm0;
    }
    let (v, t, f) = tri.counts_for_coloring(coloring);
    if (v + f + t) % 2 == 0 {
        AdmClass::AdmENonzero
    } else {
        AdmClass::Adm1
    }
}

/// Backtracking schedule: edge order plus the faces and tetrahedra that
/// become fully colored at each depth.
struct Plan {
    order: Vec<usize>,
    faces_at: Vec<Vec<usize>>,
    tets_at: Vec<Vec<usize>>,
}

impl Plan {
    fn new(tri: &Triangulation) -> Self {
        let ne = tri.num_edges();
        let mut degree = vec![0usize; ne];
        for fc in tri.faces() {
            for &e in &fc.edges {
                degree[e] += 1;
            }
        }
        let mut order: Vec<usize> = (0..ne).collect();
        order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
        let mut depth = vec![0usize; ne];
        for (d, &e) in order.iter().enumerate() {
            depth[e] = d;
        }
        let mut faces_at = vec![Vec::new(); ne];
        for (fi, fc) in tri.faces().iter().enumerate() {
            let d = fc.edges.iter().map(|&e| depth[e]).max().expect("three edges");
            faces_at[d].push(fi);
        }
        let mut tets_at = vec![Vec::new(); ne];
        for t in 0..tri.num_tetrahedra() {
            let d = tri.tet_edges(t).iter().map(|&e| depth[e]).max().expect("six edges");
            tets_at[d].push(t);
        }
        Plan {
            order,
            faces_at,
            tets_at,
        }
    }
}

fn faces_ok(tri: &Triangulation, r: u32, faces: &[usize], coloring: &[Color]) -> bool {
    faces.iter().all(|&fi| {
        let [a, b, c] = tri.faces()[fi].edges.map(|e| coloring[e]);
        admissible(r, a, b, c)
    })
}

/// Visits every admissible coloring (indexed by quotient edge) exactly
/// once, in a deterministic order.
pub fn enumerate_colorings<F: FnMut(&[Color])>(tri: &Triangulation, r: u32, mut visitor: F) {
    let plan = Plan::new(tri);
    let mut coloring = vec![0 as Color; tri.num_edges()];
    if coloring.is_empty() {
        visitor(&coloring);
        return;
    }
    enumerate_from(tri, r, &plan, 0, &mut coloring, &mut visitor);
}

fn enumerate_from<F: FnMut(&[Color])>(
    tri: &Triangulation,
    r: u32,
    plan: &Plan,
    depth: usize,
    coloring: &mut [Color],
    visitor: &mut F,
) {
    let e = plan.order[depth];
    for c in 0..(r - 1) as Color {
        coloring[e] = c;
        if !faces_ok(tri, r, &plan.faces_at[depth], coloring) {
            continue;
        }
        if depth + 1 == plan.order.len() {
            visitor(coloring);
        } else {
            enumerate_from(tri, r, plan, depth + 1, coloring, visitor);
        }
    }
}

/// Memoized local factors for one evaluation point.
struct FactorCache<'a> {
    kernel: &'a QuantumKernel,
    weights: Vec<FieldElement>,
    deltas: HashMap<[Color; 3], FieldElement>,
    tets: HashMap<[Color; 6], FieldElement>,
}

impl<'a> FactorCache<'a> {
    fn new(kernel: &'a QuantumKernel) -> Self {
        let weights = (0..kernel.r().saturating_sub(1))
            .map(|c| kernel.weight_sq(c as Color))
            .collect();
        FactorCache {
            kernel,
            weights,
            deltas: HashMap::new(),
            tets: HashMap::new(),
        }
    }

    fn delta(&mut self, mut key: [Color; 3]) -> Result<&FieldElement, QuantumError> {
        key.sort_unstable();
        if !self.deltas.contains_key(&key) {
            let v = self.kernel.delta_sq(key[0], key[1], key[2])?;
            self.deltas.insert(key, v);
        }
        Ok(&self.deltas[&key])
    }

    fn tet(&mut self, c: TetColors) -> Result<&FieldElement, QuantumError> {
        let key = c.0;
        if !self.tets.contains_key(&key) {
            let v = self.kernel.tet_factor(&c)?;
            self.tets.insert(key, v);
        }
        Ok(&self.tets[&key])
    }
}

/// `|M, φ|` for one admissible coloring: edge weights `w²`, one `Δ²` per
/// quotient face and one `(√-1)^{-S}`-twisted bracket per tetrahedron.
pub fn weight(tri: &Triangulation, coloring: &[Color], qspec: &QSpec) -> Result<FieldElement, StateSumError> {
    let mut cache = FactorCache::new(qspec.kernel());
    let mut acc = qspec.field().one();
    for &c in coloring {
        acc = &acc * &cache.weights[c as usize];
    }
    for fc in tri.faces() {
        let key = fc.edges.map(|e| coloring[e]);
        acc = &acc * cache.delta(key)?;
    }
    for t in 0..tri.num_tetrahedra() {
        acc = &acc * cache.tet(tri.tet_colors(t, coloring))?;
    }
    Ok(acc)
}

/// Exact class sums of coloring weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSums {
    pub sum0: FieldElement,
    pub sum1: FieldElement,
    /// Includes the all-even colorings.
    pub sum_e: FieldElement,
    pub adm0: u64,
    pub adm1: u64,
    /// Includes the all-even colorings.
    pub adm_e: u64,
}

impl ClassSums {
    fn zero(field: &CycloField) -> Self {
        ClassSums {
            sum0: field.zero(),
            sum1: field.zero(),
            sum_e: field.zero(),
            adm0: 0,
            adm1: 0,
            adm_e: 0,
        }
    }

    fn merge(&mut self, other: &ClassSums) {
        self.sum0 = &self.sum0 + &other.sum0;
        self.sum1 = &self.sum1 + &other.sum1;
        self.sum_e = &self.sum_e + &other.sum_e;
        self.adm0 += other.adm0;
        self.adm1 += other.adm1;
        self.adm_e += other.adm_e;
    }

    fn add(&mut self, class: AdmClass, w: &FieldElement) {
        match class {
            AdmClass::Adm0 => {
                self.sum0 = &self.sum0 + w;
                self.sum_e = &self.sum_e + w;
                self.adm0 += 1;
                self.adm_e += 1;
            }
            AdmClass::AdmENonzero => {
                self.sum_e = &self.sum_e + w;
                self.adm_e += 1;
            }
            AdmClass::Adm1 => {
                self.sum1 = &self.sum1 + w;
                self.adm1 += 1;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.adm1 + self.adm_e
    }
}

struct Worker<'a> {
    tri: &'a Triangulation,
    r: u32,
    plan: &'a Plan,
    cache: FactorCache<'a>,
    coloring: Vec<Color>,
    /// `partial[d]` is the product of all factors completed before depth `d`.
    partial: Vec<FieldElement>,
    sums: ClassSums,
}

impl<'a> Worker<'a> {
    fn new(tri: &'a Triangulation, plan: &'a Plan, kernel: &'a QuantumKernel) -> Self {
        let field = kernel.field();
        Worker {
            tri,
            r: kernel.r(),
            plan,
            cache: FactorCache::new(kernel),
            coloring: vec![0; tri.num_edges()],
            partial: vec![field.one(); tri.num_edges() + 1],
            sums: ClassSums::zero(field),
        }
    }

    fn step(&mut self, depth: usize, c: Color) -> Result<bool, QuantumError> {
        let e = self.plan.order[depth];
        self.coloring[e] = c;
        if !faces_ok(self.tri, self.r, &self.plan.faces_at[depth], &self.coloring) {
            return Ok(false);
        }
        let mut acc = &self.partial[depth] * &self.cache.weights[c as usize];
        for &fi in &self.plan.faces_at[depth] {
            let key = self.tri.faces()[fi].edges.map(|e| self.coloring[e]);
            acc = &acc * self.cache.delta(key)?;
        }
        for &t in &self.plan.tets_at[depth] {
            let tc = self.tri.tet_colors(t, &self.coloring);
            acc = &acc * self.cache.tet(tc)?;
        }
        self.partial[depth + 1] = acc;
        Ok(true)
    }

    fn descend(&mut self, depth: usize) -> Result<(), QuantumError> {
        if depth == self.plan.order.len() {
            let class = classify(self.tri, &self.coloring);
            let w = self.partial[depth].clone();
            self.sums.add(class, &w);
            return Ok(());
        }
        for c in 0..(self.r - 1) as Color {
            if self.step(depth, c)? {
                self.descend(depth + 1)?;
            }
        }
        Ok(())
    }

    fn run_branch(&mut self, first: Color) -> Result<ClassSums, QuantumError> {
        self.sums = ClassSums::zero(self.cache.kernel.field());
        if self.plan.order.is_empty() {
            if first == 0 {
                self.descend(0)?;
            }
        } else if self.step(0, first)? {
            self.descend(1)?;
        }
        Ok(self.sums.clone())
    }
}

/// Default worker count: `TVQ_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("TVQ_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Sums coloring weights by class, splitting the work on the color of the
/// first edge in the enumeration order.
pub fn class_sums(tri: &Triangulation, qspec: &QSpec, workers: usize) -> Result<ClassSums, StateSumError> {
    let kernel = qspec.kernel();
    let plan = Plan::new(tri);
    let branches = (kernel.r() - 1) as usize;
    let workers = workers.clamp(1, branches);
    let results: Mutex<Vec<Option<Result<ClassSums, QuantumError>>>> = Mutex::new(vec![None; branches]);
    let next = AtomicUsize::new(0);
    let run = || {
        let mut worker = Worker::new(tri, &plan, kernel);
        loop {
            let b = next.fetch_add(1, Ordering::Relaxed);
            if b >= branches {
                break;
            }
            let res = worker.run_branch(b as Color);
            results.lock().expect("no poisoned workers")[b] = Some(res);
        }
    };
    if workers == 1 {
        run();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(run);
            }
        });
    }
    let mut total = ClassSums::zero(qspec.field());
    for res in results.into_inner().expect("no poisoned workers") {
        total.merge(&res.expect("every branch ran")?);
    }
    Ok(total)
}

/// An invariant as an exact field element, its canonical polynomial in
/// the standard `q` when it has one, and its complex value.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub exact: FieldElement,
    pub poly: Result<QPolynomial, FieldError>,
    pub value: Complex64,
}

impl Quantity {
    pub fn new(exact: FieldElement) -> Self {
        let poly = exact.field().to_q_polynomial(&exact);
        let value = exact.to_complex();
        Quantity { exact, poly, value }
    }

    pub fn is_real(&self) -> bool {
        self.exact.conj_auto() == self.exact
    }

    /// Polynomial text, or the complex value when outside `Q(q)`.
    pub fn describe(&self) -> String {
        match &self.poly {
            Ok(p) => p.to_string(),
            Err(_) => format!("{:.6}{:+.6}i", self.value.re, self.value.im),
        }
    }
}

/// All summand invariants for one triangulation at one evaluation point.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub r: u32,
    pub evaluation: Evaluation,
    pub vertices: usize,
    pub tvstar0: Quantity,
    pub tvstar1: Quantity,
    pub tvstar_e: Quantity,
    pub tvstar: Quantity,
    pub tv0: Quantity,
    pub tv1: Quantity,
    pub tv2: Quantity,
    pub tv: Quantity,
    pub sums: ClassSums,
    /// Named consistency checks, in a fixed order.
    pub checks: Vec<(String, bool)>,
    pub elapsed: Duration,
}

/// Equality of everything except timing.
impl PartialEq for InvariantReport {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r
            && self.evaluation == o.evaluation
            && self.vertices == o.vertices
            && self.quantities() == o.quantities()
            && self.sums == o.sums
            && self.checks == o.checks
    }
}

impl InvariantReport {
    /// `(name, quantity)` pairs in display order.
    pub fn quantities(&self) -> [(&'static str, &Quantity); 8] {
        [
            ("TV_0", &self.tv0),
            ("TV_1", &self.tv1),
            ("TV_2", &self.tv2),
            ("TV", &self.tv),
            ("TV*_0", &self.tvstar0),
            ("TV*_1", &self.tvstar1),
            ("TV*_e", &self.tvstar_e),
            ("TV*", &self.tvstar),
        ]
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Applies the vertex normalizations to class sums.
pub fn normalize(
    sums: ClassSums,
    tri: &Triangulation,
    qspec: &QSpec,
    elapsed: Duration,
) -> Result<InvariantReport, StateSumError> {
    let kernel = qspec.kernel();
    let field = qspec.field();
    let r = qspec.r() as i64;
    let a = tri.num_vertices() as i64;
    let m = kernel.m();
    let per_vertex_e = m * &field.from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2 * r)));
    let per_vertex_0 = m * &field.from_rational(&BigRational::new(BigInt::from(1), BigInt::from(r)));
    let tvstar0 = &per_vertex_0.pow(a)? * &sums.sum0;
    let tvstar1 = &per_vertex_e.pow(a)? * &sums.sum1;
    let tvstar_e = &per_vertex_e.pow(a)? * &sums.sum_e;
    let omega = kernel.omega_sq();
    let omega0 = kernel.omega0_sq();
    let tv0 = &omega0 * &tvstar0;
    let tv1 = &omega * &tvstar1;
    let tv2 = &(&omega * &tvstar_e) - &tv0;
    let tv = &(&tv0 + &tv1) + &tv2;
    let tvstar = &tvstar1 + &tvstar_e;

    let checks = vec![
        ("TV = TV_0 + TV_1 + TV_2".to_string(), tv == &(&tv0 + &tv1) + &tv2),
        ("TV* = TV*_e + TV*_1".to_string(), tvstar == &tvstar_e + &tvstar1),
        ("TV* = TV / omega^2".to_string(), &tvstar * &omega == tv),
        ("partition of admissible colorings".to_string(), sums.adm0 <= sums.adm_e),
    ];
    let report = InvariantReport {
        r: qspec.r(),
        evaluation: qspec.evaluation(),
        vertices: tri.num_vertices(),
        tvstar0: Quantity::new(tvstar0),
        tvstar1: Quantity::new(tvstar1),
        tvstar_e: Quantity::new(tvstar_e),
        tvstar: Quantity::new(tvstar),
        tv0: Quantity::new(tv0),
        tv1: Quantity::new(tv1),
        tv2: Quantity::new(tv2),
        tv: Quantity::new(tv),
        checks,
        sums,
        elapsed,
    };
    let real = report.quantities().iter().all(|(_, q)| q.is_real());
    let rational = [&report.sums.sum0, &report.sums.sum1, &report.sums.sum_e]
        .iter()
        .all(|x| field.to_q_polynomial(x).is_ok());
    let mut report = report;
    report.checks.push(("invariants are real".to_string(), real));
    report.checks.push(("class sums lie in Q(q)".to_string(), rational));
    Ok(report)
}

/// Class sums followed by normalization.
pub fn compute(tri: &Triangulation, qspec: &QSpec, workers: usize) -> Result<InvariantReport, StateSumError> {
    let start = Instant::now();
    let sums = class_sums(tri, qspec, workers)?;
    normalize(sums, tri, qspec, start.elapsed())
}

/// One exact identity between two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

impl IdentityCheck {
    fn compare(name: &str, lhs: &FieldElement, rhs: &FieldElement) -> Self {
        IdentityCheck {
            name: name.to_string(),
            holds: lhs == rhs,
            lhs: Quantity::new(lhs.clone()).describe(),
            rhs: Quantity::new(rhs.clone()).describe(),
        }
    }
}

/// Reports at `q` and `-q` plus the identities relating them.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub r: u32,
    pub standard: InvariantReport,
    pub mirror: InvariantReport,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates at `u = q` and `u = -q` and checks the sum and parity
/// identities exactly.
pub fn verify_identities(tri: &Triangulation, r: u32, workers: usize) -> Result<IdentityReport, StateSumError> {
    let field = CycloField::new(r)?;
    let std_spec = QSpec::new(&field, Evaluation::Standard)?;
    let mir_spec = QSpec::new(&field, Evaluation::Mirror)?;
    let s = compute(tri, &std_spec, workers)?;
    let m = compute(tri, &mir_spec, workers)?;
    let half = field.from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)));
    let mut checks = Vec::new();
    for (label, rep) in [("q", &s), ("-q", &m)] {
        let sum = &(&rep.tv0.exact + &rep.tv1.exact) + &rep.tv2.exact;
        checks.push(IdentityCheck::compare(
            &format!("TV = TV_0 + TV_1 + TV_2 at {label}"),
            &rep.tv.exact,
            &sum,
        ));
        checks.push(IdentityCheck::compare(
            &format!("TV* = TV*_e + TV*_1 at {label}"),
            &rep.tvstar.exact,
            &(&rep.tvstar_e.exact + &rep.tvstar1.exact),
        ));
    }
    checks.push(IdentityCheck::compare("TV_0(q) = TV_0(-q)", &s.tv0.exact, &m.tv0.exact));
    checks.push(IdentityCheck::compare(
        "TV_1(q) = -TV_1(-q)",
        &s.tv1.exact,
        &-&m.tv1.exact,
    ));
    checks.push(IdentityCheck::compare("TV_2(q) = TV_2(-q)", &s.tv2.exact, &m.tv2.exact));
    checks.push(IdentityCheck::compare(
        "TV_0 + TV_2 = (TV(q) + TV(-q))/2",
        &(&s.tv0.exact + &s.tv2.exact),
        &(&half * &(&s.tv.exact + &m.tv.exact)),
    ));
    checks.push(IdentityCheck::compare(
        "TV_1 = (TV(q) - TV(-q))/2",
        &s.tv1.exact,
        &(&half * &(&s.tv.exact - &m.tv.exact)),
    ));
    Ok(IdentityReport {
        r,
        standard: s,
        mirror: m,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{doubled_tetrahedron, lens_double_cone, Triangulation};

    fn s3() -> Triangulation {
        Triangulation::build(&doubled_tetrahedron()).unwrap()
    }

    #[test]
    fn s3_r3_report() {
        let rep = compute(&s3(), &QSpec::standard(3).unwrap(), 1).unwrap();
        assert_eq!(rep.tv0.describe(), "1");
        assert_eq!(rep.tv1.describe(), "0");
        assert_eq!(rep.tv2.describe(), "0");
        assert!((rep.tvstar.value.re - 0.5).abs() < 1e-12);
        assert!(rep.all_checks_pass());
    }

    #[test]
    fn all_zero_coloring_weight_is_one() {
        let tri = s3();
        let w = weight(&tri, &[0; 6], &QSpec::standard(5).unwrap()).unwrap();
        assert!(w.is_one());
    }

    #[test]
    fn rp3_r4_has_adm1() {
        let tri = Triangulation::build(&lens_double_cone(2, 1)).unwrap();
        let rep = compute(&tri, &QSpec::standard(4).unwrap(), 2).unwrap();
        assert!(rep.sums.adm1 > 0);
        assert_eq!(rep.tv1.describe(), "q^3-q");
    }

    #[test]
    fn identities_rp3() {
        let tri = Triangulation::build(&lens_double_cone(2, 1)).unwrap();
        for r in 3..=6 {
            let rep = verify_identities(&tri, r, 1).unwrap();
            assert!(rep.all_hold(), "r={r}: {:?}", rep.checks);
        }
    }
}
