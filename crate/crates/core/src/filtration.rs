//! Ramification filtrations at a single wildly ramified point.
//!
//! A filtration is stored by its lower jumps `i_1 < ... < i_s` together with
//! the exponent `k` of `|G(P)| = p^k`. Two shapes are supported:
//!
//! * cyclic (`s == k`): every jump drops the order by a factor `p`, so
//!   `e_i = p^k` for `0 <= i <= i_1`, `e_i = p^(k - nu)` for
//!   `i_nu < i <= i_(nu+1)` and `e_i = 1` past the last jump;
//! * single jump (`s == 1`): `G_0 = ... = G_(i_1)` and `G_(i_1 + 1) = 1`,
//!   which covers the weakly ramified elementary abelian case `i_1 = 1`.
//!
//! The orders `e_i` are never materialized; every sum runs over the `s + 1`
//! constant segments.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Jumps larger than this are rejected so that every derived sum fits in `i64`.
pub const MAX_JUMP: i64 = 1 << 32;
/// Largest accepted value of `p^k`.
pub const MAX_GROUP_ORDER: i64 = 1 << 24;

/// An odd prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeChar(u32);

impl PrimeChar {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(PrimeChar(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// `p^e`, or `None` on overflow.
    pub fn checked_pow(self, e: u32) -> Option<i64> {
        (self.0 as i64).checked_pow(e)
    }

    /// `p^e` for exponents already bounded by validation.
    pub fn pow(self, e: u32) -> i64 {
        self.checked_pow(e).expect("p^e overflows i64")
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `floor(a / p)`.
pub fn delta(a: i64, p: PrimeChar) -> i64 {
    a.div_euclid(p.as_i64())
}

/// The `n`-fold composite of [`delta`].
pub fn delta_iter(a: i64, n: u32, p: PrimeChar) -> i64 {
    let mut x = a;
    for _ in 0..n {
        // 0 and -1 are fixed points
        if x == 0 || x == -1 {
            break;
        }
        x = delta(x, p);
    }
    x
}

/// Structural or arithmetic defect of a filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroExponent,
    NoJumps,
    /// Neither one jump per cyclic step nor a single jump.
    WrongJumpCount { k: u32, count: usize },
    /// `i_1 < 1`: p-group covers have `e_0 = e_1`.
    FirstJumpTooSmall(i64),
    NotIncreasing { index: usize },
    TooLarge,
    /// `a_index = numerator / denominator` is not an integer.
    HasseArf {
        index: usize,
        numerator: i64,
        denominator: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroExponent => write!(f, "k must be at least 1"),
            Violation::NoJumps => write!(f, "no jumps given"),
            Violation::WrongJumpCount { k, count } => {
                write!(f, "{count} jumps given for k = {k}; expected {k} or 1")
            }
            Violation::FirstJumpTooSmall(i) => write!(f, "first jump {i} is below 1"),
            Violation::NotIncreasing { index } => {
                write!(f, "jump {} does not exceed jump {}", index + 1, index)
            }
            Violation::TooLarge => write!(f, "jumps or group order out of supported range"),
            Violation::HasseArf {
                index,
                numerator,
                denominator,
            } => write!(
                f,
                "HasseArfViolation: a_{index} = {numerator}/{denominator} is not an integer"
            ),
        }
    }
}

/// A failed Schmid congruence on the upper jumps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchmidIssue {
    FirstJumpDivisible { sigma: i64 },
    Pair { index: usize, lower: i64, upper: i64 },
}

impl fmt::Display for SchmidIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchmidIssue::FirstJumpDivisible { sigma } => {
                write!(f, "Schmid: first upper jump {sigma} is divisible by p")
            }
            SchmidIssue::Pair {
                index,
                lower,
                upper,
            } => write!(
                f,
                "Schmid: sigma_{} = {upper} is neither p * sigma_{index} nor prime to p \
                 and at least p * sigma_{index} (sigma_{index} = {lower})",
                index + 1
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Only filled in strict mode; never makes the filtration invalid.
    pub schmid: Vec<SchmidIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a raw filtration. Never fails; all findings go into the report.
pub fn validate_filtration(
    p: PrimeChar,
    k: u32,
    jumps: &[i64],
    strict_schmid: bool,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    if k == 0 {
        v.push(Violation::ZeroExponent);
    }
    if jumps.is_empty() {
        v.push(Violation::NoJumps);
        return report;
    }
    if jumps.len() != k as usize && jumps.len() != 1 {
        v.push(Violation::WrongJumpCount {
            k,
            count: jumps.len(),
        });
    }
    if jumps[0] < 1 {
        v.push(Violation::FirstJumpTooSmall(jumps[0]));
    }
    for (index, w) in jumps.windows(2).enumerate() {
        if w[1] <= w[0] {
            v.push(Violation::NotIncreasing { index: index + 1 });
        }
    }
    if jumps.iter().any(|&i| i > MAX_JUMP)
        || p.checked_pow(k).map_or(true, |o| o > MAX_GROUP_ORDER)
    {
        v.push(Violation::TooLarge);
    }
    if !v.is_empty() {
        return report;
    }
    if jumps.len() > 1 {
        for index in 1..jumps.len() {
            let numerator = jumps[index] - jumps[index - 1];
            let denominator = p.pow(index as u32);
            if numerator % denominator != 0 {
                v.push(Violation::HasseArf {
                    index,
                    numerator,
                    denominator,
                });
            }
        }
    }
    if strict_schmid && v.is_empty() {
        let filt = LowerFiltration {
            p,
            k,
            jumps: jumps.to_vec(),
        };
        if let Ok(up) = filt.upper_jumps() {
            report.schmid = schmid_issues(p, &up.sigma);
        }
    }
    report
}

fn schmid_issues(p: PrimeChar, sigma: &[i64]) -> Vec<SchmidIssue> {
    let pp = p.as_i64();
    let mut out = Vec::new();
    if sigma[0] % pp == 0 {
        out.push(SchmidIssue::FirstJumpDivisible { sigma: sigma[0] });
    }
    for (i, w) in sigma.windows(2).enumerate() {
        let (lower, upper) = (w[0], w[1]);
        let ok = upper == pp * lower || (upper >= pp * lower && upper % pp != 0);
        if !ok {
            out.push(SchmidIssue::Pair {
                index: i + 1,
                lower,
                upper,
            });
        }
    }
    out
}

/// Upper ramification jumps `sigma_1 < ... < sigma_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperJumps {
    pub sigma: Vec<i64>,
}

impl UpperJumps {
    /// Highest upper jump `f(P)`.
    pub fn highest(&self) -> i64 {
        *self.sigma.last().expect("upper jumps are never empty")
    }
}

/// Lower-numbering ramification filtration of `G(P)`, `|G(P)| = p^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LowerFiltration {
    p: PrimeChar,
    k: u32,
    jumps: Vec<i64>,
}

impl LowerFiltration {
    /// Builds a filtration after the structural checks. Hasse-Arf
    /// integrality is not enforced here; see [`LowerFiltration::upper_jumps`].
    pub fn new(p: PrimeChar, k: u32, jumps: Vec<i64>) -> Result<Self> {
        let report = validate_filtration(p, k, &jumps, false);
        if let Some(v) = report
            .violations
            .iter()
            .find(|v| !matches!(v, Violation::HasseArf { .. }))
        {
            return Err(Error::InvalidFiltration(v.to_string()));
        }
        Ok(LowerFiltration { p, k, jumps })
    }

    /// `G_0 = G_1`, `G_2 = 1` with `|G(P)| = p^k`.
    pub fn weak(p: PrimeChar, k: u32) -> Result<Self> {
        Self::new(p, k, vec![1])
    }

    /// Cyclic filtration with lower jumps `i_nu = sum_(mu < nu) a_mu p^mu`.
    pub fn from_steps(p: PrimeChar, steps: &[i64]) -> Result<Self> {
        if steps.is_empty() || steps.iter().any(|&a| a < 1) {
            return Err(Error::InvalidFiltration(
                "steps must be positive and non-empty".into(),
            ));
        }
        let mut jumps = Vec::with_capacity(steps.len());
        let mut acc: i64 = 0;
        for (mu, &a) in steps.iter().enumerate() {
            let term = p
                .checked_pow(mu as u32)
                .and_then(|q| q.checked_mul(a))
                .ok_or_else(|| Error::InvalidFiltration("jump overflow".into()))?;
            acc = acc
                .checked_add(term)
                .ok_or_else(|| Error::InvalidFiltration("jump overflow".into()))?;
            jumps.push(acc);
        }
        Self::new(p, steps.len() as u32, jumps)
    }

    /// Cyclic filtration whose upper jumps are `sigma`.
    pub fn from_upper(p: PrimeChar, sigma: &[i64]) -> Result<Self> {
        let mut steps = Vec::with_capacity(sigma.len());
        let mut prev = 0;
        for &s in sigma {
            steps.push(s - prev);
            prev = s;
        }
        Self::from_steps(p, &steps)
    }

    pub fn p(&self) -> PrimeChar {
        self.p
    }

    /// Exponent of `|G(P)| = p^k`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn jumps(&self) -> &[i64] {
        &self.jumps
    }

    /// `e_0 = |G(P)|`.
    pub fn e0(&self) -> i64 {
        self.p.pow(self.k)
    }

    pub fn is_cyclic(&self) -> bool {
        self.jumps.len() == self.k as usize
    }

    pub fn is_weak(&self) -> bool {
        self.jumps == [1]
    }

    /// Highest lower jump `N_P`.
    pub fn highest_jump(&self) -> i64 {
        *self.jumps.last().expect("validated filtration has jumps")
    }

    /// Constant pieces `(first, last, e)` covering `0..=N_P`.
    pub fn segments(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        let single = self.jumps.len() == 1;
        (0..self.jumps.len()).map(move |nu| {
            let first = if nu == 0 { 0 } else { self.jumps[nu - 1] + 1 };
            let order = if single {
                self.e0()
            } else {
                self.p.pow(self.k - nu as u32)
            };
            (first, self.jumps[nu], order)
        })
    }

    /// `e_i = |G_i(P)|`.
    pub fn order_at(&self, i: i64) -> i64 {
        if i < 0 {
            return self.e0();
        }
        self.segments()
            .find(|&(_, last, _)| i <= last)
            .map_or(1, |(_, _, e)| e)
    }

    /// Herbrand function `phi(u) = (1/e_0) * sum_(i=1)^u e_i`.
    pub fn herbrand_phi(&self, u: i64) -> Ratio<i64> {
        let mut total: i64 = 0;
        if u <= 0 {
            return Ratio::from_integer(0);
        }
        for (first, last, e) in self.segments() {
            let lo = first.max(1);
            let hi = last.min(u);
            if hi >= lo {
                total += (hi - lo + 1) * e;
            }
        }
        let n = self.highest_jump();
        if u > n {
            total += u - n;
        }
        Ratio::new(total, self.e0())
    }

    /// `a_0 = i_1` and `a_nu = (i_(nu+1) - i_nu) / p^nu`.
    pub fn steps(&self) -> Result<Vec<i64>> {
        let mut out = vec![self.jumps[0]];
        for index in 1..self.jumps.len() {
            let numerator = self.jumps[index] - self.jumps[index - 1];
            let denominator = self.p.pow(index as u32);
            if numerator % denominator != 0 {
                return Err(Error::HasseArfViolation {
                    index,
                    numerator,
                    denominator,
                });
            }
            out.push(numerator / denominator);
        }
        Ok(out)
    }

    /// Upper jumps `sigma_nu = phi(i_nu)`; all integers under Hasse-Arf.
    pub fn upper_jumps(&self) -> Result<UpperJumps> {
        // locate the offending step first so the error names it
        self.steps()?;
        let sigma = self
            .jumps
            .iter()
            .map(|&i| {
                let phi = self.herbrand_phi(i);
                debug_assert!(phi.is_integer());
                phi.to_integer()
            })
            .collect();
        Ok(UpperJumps { sigma })
    }

    /// Highest upper jump `f(P)`.
    pub fn f(&self) -> Result<i64> {
        Ok(self.upper_jumps()?.highest())
    }

    /// Exponent of `P` in the different: `sum_(i >= 0) (e_i - 1)`.
    pub fn different_exponent(&self) -> i64 {
        self.segments()
            .map(|(first, last, e)| (last - first + 1) * (e - 1))
            .sum()
    }

    /// `d_P = sum_(i=0)^(N_P) (2 e_i - 2)`.
    pub fn d_p(&self) -> i64 {
        2 * self.different_exponent()
    }

    /// `Delta^k(d_P)`, evaluated on `d_P` directly.
    pub fn delta_k_d_p(&self) -> i64 {
        delta_iter(self.d_p(), self.k, self.p)
    }

    /// `2 + 2 f(P) + Delta^k(-2 N_P - 2)`; equals [`Self::delta_k_d_p`] on
    /// cyclic filtrations.
    pub fn delta_k_d_p_closed_form(&self) -> Result<i64> {
        Ok(2 + 2 * self.f()? + delta_iter(-2 * self.highest_jump() - 2, self.k, self.p))
    }

    /// Jump of the degree-p step `X_(n-1) -> X_n` of the cyclic tower at the
    /// image of `P`: `N^(n) = i_(k-n+1)`.
    pub fn level_jump(&self, n: u32) -> Result<i64> {
        if n == 0 || n > self.k {
            return Err(Error::OutOfRange { level: n, k: self.k });
        }
        if !self.is_cyclic() {
            return Err(Error::InvalidFiltration(
                "level jumps need a cyclic filtration".into(),
            ));
        }
        Ok(self.jumps[(self.k - n) as usize])
    }

    pub fn validate(&self, strict_schmid: bool) -> ValidationReport {
        validate_filtration(self.p, self.k, &self.jumps, strict_schmid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> PrimeChar {
        PrimeChar::new(n).unwrap()
    }

    fn filt(pp: u32, k: u32, jumps: &[i64]) -> LowerFiltration {
        LowerFiltration::new(p(pp), k, jumps.to_vec()).unwrap()
    }

    #[test]
    fn prime_char_rejects_two_and_composites() {
        assert!(PrimeChar::new(2).is_err());
        assert!(PrimeChar::new(9).is_err());
        assert!(PrimeChar::new(1).is_err());
        assert_eq!(PrimeChar::new(3).unwrap().get(), 3);
        assert_eq!(PrimeChar::new(7919).unwrap().get(), 7919);
    }

    #[test]
    fn herbrand_examples() {
        let f = filt(3, 1, &[5]);
        for u in 0..=5 {
            assert_eq!(f.herbrand_phi(u), Ratio::from_integer(u));
        }
        assert_eq!(filt(3, 2, &[1, 4]).herbrand_phi(4), Ratio::from_integer(2));
        assert_eq!(filt(3, 2, &[1, 4]).herbrand_phi(0), Ratio::from_integer(0));
        assert_eq!(filt(3, 2, &[1, 4]).herbrand_phi(2), Ratio::new(4, 3));
    }

    #[test]
    fn upper_jump_examples() {
        let up = filt(3, 2, &[1, 4]).upper_jumps().unwrap();
        assert_eq!(up.sigma, vec![1, 2]);
        assert_eq!(up.highest(), 2);
        assert_eq!(filt(5, 1, &[7]).upper_jumps().unwrap().sigma, vec![7]);
        assert_eq!(
            filt(3, 2, &[1, 3]).upper_jumps(),
            Err(Error::HasseArfViolation {
                index: 1,
                numerator: 2,
                denominator: 3
            })
        );
    }

    #[test]
    fn validation_modes() {
        let relaxed = validate_filtration(p(3), 2, &[1, 4], false);
        assert!(relaxed.is_valid());
        assert!(relaxed.schmid.is_empty());

        let strict = validate_filtration(p(3), 2, &[1, 4], true);
        assert!(strict.is_valid());
        assert_eq!(
            strict.schmid,
            vec![SchmidIssue::Pair {
                index: 1,
                lower: 1,
                upper: 2
            }]
        );

        // sigma = (1, 2) at p = 5: 2 < 5 fails both branches
        let strict5 = validate_filtration(p(5), 2, &[1, 6], true);
        assert!(strict5.is_valid());
        assert_eq!(strict5.schmid.len(), 1);

        // sigma = (1, 3) and (1, 4) at p = 3 pass
        assert!(validate_filtration(p(3), 2, &[1, 7], true).schmid.is_empty());
        assert!(validate_filtration(p(3), 2, &[1, 10], true).schmid.is_empty());
        // sigma = (1, 6): >= 3 but divisible by 3
        assert_eq!(validate_filtration(p(3), 2, &[1, 16], true).schmid.len(), 1);
        assert_eq!(
            validate_filtration(p(3), 1, &[3], true).schmid,
            vec![SchmidIssue::FirstJumpDivisible { sigma: 3 }]
        );

        let bad = validate_filtration(p(3), 2, &[1, 3], true);
        assert!(!bad.is_valid());
        assert!(matches!(bad.violations[0], Violation::HasseArf { .. }));
    }

    #[test]
    fn structural_violations() {
        assert!(!validate_filtration(p(3), 2, &[], false).is_valid());
        assert!(!validate_filtration(p(3), 2, &[0, 3], false).is_valid());
        assert!(!validate_filtration(p(3), 2, &[4, 4], false).is_valid());
        assert!(!validate_filtration(p(3), 3, &[1, 4], false).is_valid());
        assert!(!validate_filtration(p(3), 0, &[1], false).is_valid());
        assert!(!validate_filtration(p(3), 40, &[1], false).is_valid());
        assert!(validate_filtration(p(3), 3, &[1], false).is_valid());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(0, p(3)), 0);
        assert_eq!(delta(0, p(7)), 0);
        assert_eq!(delta(-4, p(3)), -2);
        assert_eq!(delta(-4, p(5)), -1);
        assert_eq!(delta_iter(44, 2, p(3)), 4);
        assert_eq!(delta_iter(-1, 9, p(3)), -1);
        assert_eq!(delta_iter(-10, 2, p(3)), -2);
    }

    #[test]
    fn d_p_examples() {
        assert_eq!(filt(3, 1, &[1]).d_p(), 8);
        assert_eq!(filt(3, 2, &[1, 4]).d_p(), 44);
        assert_eq!(filt(5, 1, &[1]).d_p(), 16);
    }

    #[test]
    fn delta_k_d_p_examples() {
        for (pp, k, jumps, expected) in [
            (3, 2, vec![1, 4], 4),
            (3, 1, vec![1], 2),
            (5, 1, vec![1], 3),
        ] {
            let f = filt(pp, k, &jumps);
            assert_eq!(f.delta_k_d_p(), expected);
            assert_eq!(f.delta_k_d_p_closed_form().unwrap(), expected);
        }
    }

    #[test]
    fn level_jump_examples() {
        let f = filt(3, 2, &[1, 4]);
        assert_eq!(f.level_jump(1).unwrap(), 4);
        assert_eq!(f.level_jump(2).unwrap(), 1);
        assert_eq!(f.level_jump(3), Err(Error::OutOfRange { level: 3, k: 2 }));
        assert_eq!(filt(5, 1, &[9]).level_jump(1).unwrap(), 9);
    }

    #[test]
    fn single_jump_orders() {
        let f = LowerFiltration::weak(p(3), 2).unwrap();
        assert_eq!(f.order_at(0), 9);
        assert_eq!(f.order_at(1), 9);
        assert_eq!(f.order_at(2), 1);
        assert_eq!(f.different_exponent(), 16);
        assert!(f.is_weak());
        assert!(!f.is_cyclic());
    }

    #[test]
    fn from_steps_and_upper_agree() {
        let a = LowerFiltration::from_steps(p(3), &[1, 2]).unwrap();
        assert_eq!(a.jumps(), &[1, 7]);
        let b = LowerFiltration::from_upper(p(3), &[1, 3]).unwrap();
        assert_eq!(a, b);
    }
}
