//! Random cyclic covers, the mandatory identities, and greedy shrinking of
//! failures.
//!
//! Upper jumps are drawn to satisfy Schmid's congruences: `sigma_1` prime to
//! p, and each next jump either `p sigma` or `p sigma + d` prime to p.

use std::fmt::Write as _;

use deftan::borne::{self, DigitOrder};
use deftan::prank::PrankReport;
use deftan::{BranchPoint, CoverSpec, GroupShape, LowerFiltration, PrimeChar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_G_Y: i64 = 5;
pub const MAX_R: usize = 6;
pub const MAX_V: u32 = 3;
pub const MAX_STEP: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawPoint {
    pub k: u32,
    pub s1: i64,
    /// `None` for `sigma -> p sigma`, `Some(d)` for `sigma -> p sigma + d`.
    pub steps: Vec<Option<i64>>,
}

impl RawPoint {
    pub fn upper(&self, p: i64) -> Vec<i64> {
        let mut sigma = vec![if self.s1 % p == 0 { self.s1 + 1 } else { self.s1 }];
        for step in self.steps.iter().take(self.k as usize - 1) {
            let last = *sigma.last().unwrap();
            sigma.push(match *step {
                None => p * last,
                Some(d) if d % p == 0 => p * last + d + 1,
                Some(d) => p * last + d,
            });
        }
        sigma
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawSpec {
    pub p: u32,
    pub v: u32,
    pub g_y: i64,
    pub gamma_y: i64,
    pub points: Vec<RawPoint>,
}

impl RawSpec {
    /// `None` when the data do not describe a usable cover (`g_X < 2`).
    pub fn build(&self) -> Option<CoverSpec> {
        let p = PrimeChar::new(self.p).ok()?;
        let branch = self
            .points
            .iter()
            .enumerate()
            .map(|(i, pt)| {
                let filt = LowerFiltration::from_upper(p, &pt.upper(p.as_i64())).ok()?;
                Some(BranchPoint::new(format!("P{i}"), filt))
            })
            .collect::<Option<Vec<_>>>()?;
        let spec = CoverSpec::new(p, GroupShape::Cyclic(self.v), self.g_y, Some(self.gamma_y), branch).ok()?;
        (spec.genus_top().ok()? >= 2 && spec.r() >= 1).then_some(spec)
    }

    /// Smaller neighbours, most aggressive first.
    fn shrink_candidates(&self) -> Vec<RawSpec> {
        let mut out = Vec::new();
        for i in (1..self.points.len()).rev() {
            let mut s = self.clone();
            s.points.remove(i);
            out.push(s);
        }
        if self.v > 1 {
            let mut s = self.clone();
            s.v -= 1;
            for pt in &mut s.points {
                pt.k = pt.k.min(s.v);
            }
            out.push(s);
        }
        if self.g_y > 0 {
            let mut s = self.clone();
            s.g_y -= 1;
            s.gamma_y = s.gamma_y.min(s.g_y);
            out.push(s);
        }
        if self.gamma_y > 0 {
            let mut s = self.clone();
            s.gamma_y -= 1;
            out.push(s);
        }
        for i in 0..self.points.len() {
            let pt = &self.points[i];
            if i > 0 && pt.k > 1 {
                let mut s = self.clone();
                s.points[i].k -= 1;
                out.push(s);
            }
            if pt.s1 > 1 {
                let mut s = self.clone();
                s.points[i].s1 -= 1;
                out.push(s);
            }
            for j in 0..pt.steps.len() {
                match pt.steps[j] {
                    Some(d) => {
                        let mut s = self.clone();
                        s.points[i].steps[j] = None;
                        out.push(s);
                        if d > 1 {
                            let mut s = self.clone();
                            s.points[i].steps[j] = Some(d - 1);
                            out.push(s);
                        }
                    }
                    None => {}
                }
            }
        }
        out
    }
}

fn random_point<R: Rng>(rng: &mut R, k: u32) -> RawPoint {
    RawPoint {
        k,
        s1: rng.gen_range(1..=MAX_STEP),
        steps: (0..MAX_V - 1)
            .map(|_| rng.gen_bool(0.5).then(|| rng.gen_range(1..=MAX_STEP)))
            .collect(),
    }
}

/// A random Schmid-valid cyclic cover with `g_X >= 2`. The first branch
/// point is totally ramified, which keeps every `gamma_Y` consistent.
pub fn random_raw<R: Rng>(rng: &mut R) -> RawSpec {
    loop {
        let p = if rng.gen_bool(0.5) { 3 } else { 5 };
        let v = rng.gen_range(1..=MAX_V);
        let g_y = rng.gen_range(0..=MAX_G_Y);
        let r = rng.gen_range(1..=MAX_R);
        let points = (0..r)
            .map(|i| {
                let k = if i == 0 { v } else { rng.gen_range(1..=v) };
                random_point(rng, k)
            })
            .collect();
        let raw = RawSpec {
            p,
            v,
            g_y,
            gamma_y: rng.gen_range(0..=g_y),
            points,
        };
        if raw.build().is_some() {
            return raw;
        }
    }
}

pub fn generate(seed: u64, count: usize) -> Vec<RawSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_raw(&mut rng)).collect()
}

/// Largest `t` used for weakly ramified points at each characteristic,
/// keeping `|G(P)| <= 49` for the bar resolution.
pub fn weak_rank_limit(p: u32) -> u32 {
    if p == 3 {
        3
    } else {
        2
    }
}

/// Random weakly ramified covers with elementary abelian `G` over
/// `p in {3, 5, 7}`, all with `g_X >= 2`.
pub fn generate_weak(seed: u64, count: usize) -> Vec<CoverSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = [3u32, 5, 7][rng.gen_range(0..3)];
        let pc = PrimeChar::new(p).unwrap();
        let rank = rng.gen_range(1..=weak_rank_limit(p));
        let g_y = rng.gen_range(0..=MAX_G_Y);
        let r = rng.gen_range(1..=MAX_R);
        let branch = (0..r)
            .map(|i| {
                let t = rng.gen_range(1..=rank);
                BranchPoint::new(format!("Q{i}"), LowerFiltration::weak(pc, t).unwrap())
            })
            .collect();
        let shape = if rank == 1 { GroupShape::Cyclic(1) } else { GroupShape::ElementaryAbelian(rank) };
        if let Ok(spec) = CoverSpec::new(pc, shape, g_y, None, branch) {
            if spec.genus_top().map_or(false, |g| g >= 2) {
                out.push(spec);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub lhs: i64,
    pub rhs: i64,
}

/// Runs the mandatory identities on one spec.
pub fn check_spec(spec: &CoverSpec, order: DigitOrder) -> Vec<Failure> {
    let mut out = Vec::new();
    let mut expect = |check: &'static str, lhs: i64, rhs: i64| {
        if lhs != rhs {
            out.push(Failure { check, lhs, rhs });
        }
    };
    let g = match spec.genus_top() {
        Ok(g) => g,
        Err(_) => return vec![Failure { check: "genus", lhs: 0, rhs: 0 }],
    };
    match (borne::borne_multiplicities_with(spec, order), borne::dim_h1_cyclic_closed_form(spec)) {
        (Ok(b), Ok(closed)) => {
            expect("conservation", b.sum_jm(), 3 * g - 3);
            let deg_route = b.deg_d1 + 1 - spec.g_y();
            expect("dim_sum_m_vs_deg_d1", b.sum_m(), deg_route);
            expect("dim_deg_d1_vs_closed_form", deg_route, closed);
            if b.min_m() < 0 {
                expect("non_negativity", b.min_m(), 0);
            }
        }
        _ => expect("borne_route_available", 0, 1),
    }
    match spec.genus_top_telescoping() {
        Ok(t) => expect("telescoping_genus", t, g),
        Err(_) => expect("telescoping_genus", -1, g),
    }
    if spec.g_y() >= 1 {
        match PrankReport::new(spec) {
            Ok(r) => expect("semisimple_two_routes", r.semisimple_dim, r.subrao_dim),
            Err(_) => expect("prank_route_available", 0, 1),
        }
    }
    out
}

fn fails(raw: &RawSpec, order: DigitOrder) -> Option<Vec<Failure>> {
    let spec = raw.build()?;
    let f = check_spec(&spec, order);
    (!f.is_empty()).then_some(f)
}

/// Greedy descent: take the first smaller neighbour that still fails.
pub fn shrink(raw: &RawSpec, order: DigitOrder) -> RawSpec {
    let mut current = raw.clone();
    'descent: loop {
        for cand in current.shrink_candidates() {
            if fails(&cand, order).is_some() {
                current = cand;
                continue 'descent;
            }
        }
        return current;
    }
}

#[derive(Debug, Clone)]
pub struct FailedCase {
    pub original: RawSpec,
    pub failures: Vec<Failure>,
    pub minimal: RawSpec,
    pub minimal_failures: Vec<Failure>,
}

#[derive(Debug, Clone)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: usize,
    pub order: DigitOrder,
    pub failed: Vec<FailedCase>,
}

impl FuzzSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed.is_empty() {
            0
        } else {
            2
        }
    }
}

pub fn run(seed: u64, count: usize, order: DigitOrder) -> FuzzSummary {
    let mut failed = Vec::new();
    for raw in generate(seed, count) {
        let spec = raw.build().expect("generator yields usable covers");
        let failures = check_spec(&spec, order);
        if failures.is_empty() {
            continue;
        }
        let minimal = shrink(&raw, order);
        let minimal_failures = fails(&minimal, order).unwrap_or_default();
        failed.push(FailedCase {
            original: raw,
            failures,
            minimal,
            minimal_failures,
        });
    }
    // stable presentation order, independent of generation order
    failed.sort_by_key(|c| fnv1a(&document_text(&c.original.build().unwrap(), order)));
    FuzzSummary {
        seed,
        count,
        order,
        failed,
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The spec as a cover document.
pub fn document_text(spec: &CoverSpec, order: DigitOrder) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "characteristic = {}", spec.p());
    let _ = writeln!(out, "genus_base = {}", spec.g_y());
    if let Some(g) = spec.gamma_y() {
        let _ = writeln!(out, "p_rank_base = {g}");
    }
    let _ = writeln!(out, "\n[group]\nshape = \"{}\"\nexponent_or_rank = {}", spec.group().name(), spec.group().log_order());
    for b in spec.branch() {
        let jumps: Vec<String> = b.filt.jumps().iter().map(i64::to_string).collect();
        let _ = writeln!(out, "\n[[branch]]\nlabel = \"{}\"\nk = {}\njumps = [{}]", b.label, b.k(), jumps.join(", "));
    }
    let _ = writeln!(out, "\n[options]\ndigit_order = \"{}\"", order.name());
    out
}

pub fn summary_text(s: &FuzzSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "fuzz: seed {} count {} digit order {}: {} passed, {} failed",
        s.seed,
        s.count,
        s.order.name(),
        s.count - s.failed.len(),
        s.failed.len()
    );
    for case in &s.failed {
        let names: Vec<String> = case.failures.iter().map(|f| format!("{} ({} vs {})", f.check, f.lhs, f.rhs)).collect();
        let _ = writeln!(out, "\nfailed: {}", names.join(", "));
        let minimal = case.minimal.build().expect("shrinking keeps covers usable");
        let names: Vec<String> = case.minimal_failures.iter().map(|f| format!("{} ({} vs {})", f.check, f.lhs, f.rhs)).collect();
        let _ = writeln!(out, "smallest failing spec: {}", names.join(", "));
        out.push_str(&document_text(&minimal, s.order));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_specs_are_schmid_valid() {
        for raw in generate(3, 50) {
            let spec = raw.build().unwrap();
            for b in spec.branch() {
                assert!(b.filt.validate(true).schmid.is_empty(), "{:?}", b.filt.jumps());
            }
            assert!(spec.genus_top().unwrap() >= 2);
            assert!(spec.branch().len() <= MAX_R && spec.g_y() <= MAX_G_Y);
        }
    }

    #[test]
    fn correct_build_passes() {
        assert_eq!(run(11, 40, DigitOrder::Paper).exit_code(), 0);
        assert_eq!(run(0, 0, DigitOrder::Paper).exit_code(), 0);
    }

    #[test]
    fn mutant_is_caught_and_shrunk() {
        let s = run(1, 100, DigitOrder::Reversed);
        assert_eq!(s.exit_code(), 2);
        let case = &s.failed[0];
        assert!(case.minimal_failures.iter().any(|f| f.check == "non_negativity"));
        let small = case.minimal.build().unwrap();
        let big = case.original.build().unwrap();
        assert!(small.r() <= big.r());
    }

    #[test]
    fn documents_round_trip() {
        for raw in generate(8, 10) {
            let spec = raw.build().unwrap();
            let doc = crate::document::parse_document(&document_text(&spec, DigitOrder::Paper)).unwrap();
            assert_eq!(doc.spec, spec);
        }
    }

    #[test]
    fn weak_corpus() {
        let specs = generate_weak(4, 30);
        assert!(specs.iter().all(|s| s.is_weakly_ramified()));
        assert!(specs.iter().all(|s| s.branch().iter().all(|b| b.e0() <= 49)));
    }
}
