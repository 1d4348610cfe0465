//! Multiplicities of the indecomposables `V_j` in `H^0(X, O_X(2D*))` for a
//! cyclic group `G = Z/p^v`, via pushforwards down the tower
//! `X = X_0 -> X_1 -> ... -> X_v = Y` of degree-p quotients.
//!
//! The invariant divisor `2D* = 2 pi^* div(phi) + sum_P d_P P` is never
//! expanded into points. A [`TowerDivisor`] keeps the pulled-back part as a
//! multiplier of a base degree on `Y` (its support avoids the branch locus,
//! so every pushforward leaves it alone) and one coefficient per branch
//! orbit, which is constant along the orbit by invariance.

use crate::cover::{CoverSpec, GroupShape};
use crate::error::{Error, Result};
use crate::filtration::{delta_iter, LowerFiltration, PrimeChar};

/// Largest `p^v` for which the full sweep over `j` is attempted.
pub const MAX_SWEEP: i64 = 1 << 16;

/// Which tower level consumes which p-adic digit of `j - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DigitOrder {
    /// Level `n` (the step `X_(n-1) -> X_n`) uses digit `alpha_(v-n)`, so the
    /// step next to `X` uses the most significant digit.
    #[default]
    Paper,
    /// Level `n` uses digit `alpha_(n-1)`.
    Reversed,
}

impl DigitOrder {
    pub fn name(self) -> &'static str {
        match self {
            DigitOrder::Paper => "paper",
            DigitOrder::Reversed => "reversed",
        }
    }
}

/// The p-adic digits `alpha_0(j), ..., alpha_(v-1)(j)` of `j - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSchedule {
    pub j: i64,
    pub digits: Vec<u32>,
}

impl DigitSchedule {
    pub fn new(j: i64, p: PrimeChar, v: u32) -> Result<Self> {
        let top = p.pow(v);
        if j < 1 || j > top {
            return Err(Error::DomainError(format!("j = {j} outside 1..={top}")));
        }
        let mut rest = j - 1;
        let digits = (0..v)
            .map(|_| {
                let d = rest % p.as_i64();
                rest /= p.as_i64();
                d as u32
            })
            .collect();
        Ok(DigitSchedule { j, digits })
    }

    /// Digit consumed by the step `X_(level-1) -> X_level`.
    pub fn digit_for_level(&self, level: u32, order: DigitOrder) -> u32 {
        let v = self.digits.len() as u32;
        match order {
            DigitOrder::Paper => self.digits[(v - level) as usize],
            DigitOrder::Reversed => self.digits[(level - 1) as usize],
        }
    }
}

/// `multiplier` times the pullback of a degree-`base_degree` divisor on `Y`
/// whose support misses the branch locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizontal {
    pub multiplier: i64,
    pub base_degree: i64,
}

/// An invariant divisor on `X_level`; `vertical[i]` is the coefficient at
/// each point above the `i`-th branch point of the spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerDivisor {
    pub level: u32,
    pub horizontal: Horizontal,
    pub vertical: Vec<i64>,
}

fn tower_height(spec: &CoverSpec) -> Result<u32> {
    match spec.group() {
        GroupShape::Cyclic(v) => Ok(v),
        _ => Err(Error::DomainError("the tower needs a cyclic group".into())),
    }
}

impl TowerDivisor {
    /// `2D*` on `X = X_0`.
    pub fn two_dstar(spec: &CoverSpec) -> Self {
        TowerDivisor {
            level: 0,
            horizontal: Horizontal {
                multiplier: 2,
                base_degree: 2 * spec.g_y() - 2,
            },
            vertical: spec.branch().iter().map(|b| b.filt.d_p()).collect(),
        }
    }

    /// Coefficient at the points above the branch point with this label.
    pub fn coefficient(&self, spec: &CoverSpec, label: &str) -> Option<i64> {
        spec.branch()
            .iter()
            .position(|b| b.label == label)
            .map(|i| self.vertical[i])
    }

    /// Exact degree on `X_level`.
    pub fn degree(&self, spec: &CoverSpec) -> Result<i64> {
        let v = tower_height(spec)?;
        let p = spec.p();
        let n = self.level;
        let mut deg = self.horizontal.multiplier * self.horizontal.base_degree * p.pow(v - n);
        for (b, &c) in spec.branch().iter().zip(&self.vertical) {
            deg += c * p.pow(v - n.max(b.k()));
        }
        Ok(deg)
    }

    /// `pi_(n*)^alpha` for `n = level + 1`: at a point that ramifies in
    /// `X_(n-1) -> X_n` the coefficient becomes `floor((c - alpha N^(n)) / p)`,
    /// elsewhere it is unchanged.
    pub fn pushforward_alpha(&self, alpha: u32, spec: &CoverSpec) -> Result<TowerDivisor> {
        let v = tower_height(spec)?;
        let p = spec.p();
        if alpha >= p.get() {
            return Err(Error::DomainError(format!("alpha = {alpha} is not a digit base {p}")));
        }
        let n = self.level + 1;
        if n > v {
            return Err(Error::OutOfRange { level: n, k: v });
        }
        let vertical = spec
            .branch()
            .iter()
            .zip(&self.vertical)
            .map(|(b, &c)| pushforward_coefficient(c, alpha, n, &b.filt))
            .collect::<Result<Vec<_>>>()?;
        Ok(TowerDivisor {
            level: n,
            horizontal: self.horizontal,
            vertical,
        })
    }
}

/// Single-coefficient form of [`TowerDivisor::pushforward_alpha`].
pub fn pushforward_coefficient(c: i64, alpha: u32, level: u32, filt: &LowerFiltration) -> Result<i64> {
    if filt.k() < level {
        return Ok(c);
    }
    let jump = filt.level_jump(level)?;
    Ok((c - alpha as i64 * jump).div_euclid(filt.p().as_i64()))
}

/// `D(j)` on `Y`: the `v` pushforwards of `2D*` driven by the digits of `j - 1`.
pub fn divisor_dj(spec: &CoverSpec, j: i64, order: DigitOrder) -> Result<TowerDivisor> {
    let v = tower_height(spec)?;
    let schedule = DigitSchedule::new(j, spec.p(), v)?;
    let mut div = TowerDivisor::two_dstar(spec);
    for level in 1..=v {
        div = div.pushforward_alpha(schedule.digit_for_level(level, order), spec)?;
    }
    Ok(div)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorneReport {
    /// `m_1, ..., m_(p^v)`.
    pub m: Vec<i64>,
    /// `deg D(1), ..., deg D(p^v)`.
    pub deg_d: Vec<i64>,
    pub dim_covariants: i64,
    pub deg_d1: i64,
}

impl BorneReport {
    pub fn sum_m(&self) -> i64 {
        self.m.iter().sum()
    }

    /// `sum_j j * m_j`, the dimension of the module.
    pub fn sum_jm(&self) -> i64 {
        self.m
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64 + 1) * c)
            .sum()
    }

    pub fn min_m(&self) -> i64 {
        self.m.iter().copied().min().unwrap_or(0)
    }
}

fn check_preconditions(spec: &CoverSpec) -> Result<u32> {
    let v = tower_height(spec)?;
    if spec.branch().is_empty() {
        return Err(Error::NoBranchPoints);
    }
    let g_x = spec.genus_top()?;
    if g_x < 2 {
        return Err(Error::DegreeTooSmall {
            degree: 4 * g_x - 4,
            bound: 2 * g_x - 2,
        });
    }
    if spec.p().checked_pow(v).map_or(true, |n| n > MAX_SWEEP) {
        return Err(Error::DomainError(format!("p^v above sweep limit {MAX_SWEEP}")));
    }
    Ok(v)
}

/// All `m_j` with the given digit order.
///
/// `m_j = deg D(j) - deg D(j+1)` for `j < p^v` and
/// `m_(p^v) = 1 - g_Y + deg D(p^v)`.
pub fn borne_multiplicities_with(spec: &CoverSpec, order: DigitOrder) -> Result<BorneReport> {
    let v = check_preconditions(spec)?;
    let top = spec.p().pow(v);
    let deg_d = (1..=top)
        .map(|j| divisor_dj(spec, j, order)?.degree(spec))
        .collect::<Result<Vec<_>>>()?;
    let mut m: Vec<i64> = deg_d.windows(2).map(|w| w[0] - w[1]).collect();
    m.push(1 - spec.g_y() + deg_d[deg_d.len() - 1]);
    let deg_d1 = deg_d[0];
    Ok(BorneReport {
        dim_covariants: m.iter().sum(),
        m,
        deg_d,
        deg_d1,
    })
}

pub fn borne_multiplicities(spec: &CoverSpec) -> Result<BorneReport> {
    borne_multiplicities_with(spec, DigitOrder::Paper)
}

/// `dim O_X(2D*)_G = deg D(1) + 1 - g_Y`, checked against `sum_j m_j`.
pub fn dim_covariants(spec: &CoverSpec) -> Result<i64> {
    check_preconditions(spec)?;
    let deg_d1 = divisor_dj(spec, 1, DigitOrder::Paper)?.degree(spec)?;
    let value = deg_d1 + 1 - spec.g_y();
    let report = borne_multiplicities(spec)?;
    if report.sum_m() != value {
        return Err(Error::InternalMismatch {
            what: "sum of multiplicities vs deg D(1) + 1 - g_Y",
            lhs: report.sum_m(),
            rhs: value,
        });
    }
    Ok(value)
}

/// Closed form `3(g_Y - 1) + 2r + sum_P (2 f(P) + Delta^k(-2 N_P - 2))`,
/// without the cross-check.
pub fn dim_h1_cyclic_closed_form(spec: &CoverSpec) -> Result<i64> {
    tower_height(spec)?;
    let p = spec.p();
    let mut total = 3 * (spec.g_y() - 1) + 2 * spec.r();
    for b in spec.branch() {
        total += 2 * b.filt.f()? + delta_iter(-2 * b.filt.highest_jump() - 2, b.k(), p);
    }
    Ok(total)
}

/// `dim H^1(Z/p^v, T_X)` by the closed form, checked against the
/// pushforward route.
pub fn dim_h1_cyclic(spec: &CoverSpec) -> Result<i64> {
    let closed = dim_h1_cyclic_closed_form(spec)?;
    let covariants = dim_covariants(spec)?;
    if closed != covariants {
        return Err(Error::InternalMismatch {
            what: "closed form vs deg D(1) + 1 - g_Y",
            lhs: closed,
            rhs: covariants,
        });
    }
    Ok(closed)
}

/// Comparison for upper jumps in geometric progression `sigma_(nu+1) = p sigma_nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricJumpsCheck {
    pub jumps: Vec<i64>,
    /// `f(P) + Delta^k(-2 N_P - 2)` evaluated on the filtration.
    pub direct: i64,
    /// `a_0 (p^k - 1) + floor(-2 a_0 (p^(2k) - 1) / (p^(k+1) (p + 1)) - 2 / p^k)`.
    pub paper_closed_form: i64,
    pub agree: bool,
}

pub fn example_geometric_jumps(a0: i64, k: u32, p: PrimeChar) -> Result<GeometricJumpsCheck> {
    if a0 < 1 || k < 1 {
        return Err(Error::DomainError("a0 and k must be positive".into()));
    }
    let pp = p.as_i64();
    // a_nu = a_0 p^(nu-1) (p-1) for nu >= 1
    let steps: Vec<i64> = (0..k)
        .map(|nu| if nu == 0 { a0 } else { a0 * p.pow(nu - 1) * (pp - 1) })
        .collect();
    let filt = LowerFiltration::from_steps(p, &steps)?;
    let direct = filt.f()? + delta_iter(-2 * filt.highest_jump() - 2, k, p);

    let pk = p.pow(k);
    // -2 a0 (p^2k - 1) / (p^(k+1)(p+1)) - 2/p^k over the common denominator p^(k+1)(p+1)
    let den = p.pow(k + 1) * (pp + 1);
    let num = -2 * a0 * (pk * pk - 1) - 2 * pp * (pp + 1);
    let paper_closed_form = a0 * (pk - 1) + num.div_euclid(den);
    Ok(GeometricJumpsCheck {
        jumps: filt.jumps().to_vec(),
        direct,
        paper_closed_form,
        agree: direct == paper_closed_form,
    })
}
