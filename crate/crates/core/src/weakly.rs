//! Weakly ramified covers: the local skyscraper modules `Sigma_P` and the
//! assembly of `dim H^1(G, T_X)` from their homology.
//!
//! `G(P) = (Z/p)^t` is encoded like `F_(p^t)`: the element with base-p digits
//! `g_0, ..., g_(t-1)` is the sum of `g_i` times the `i`-th generator. Group
//! multiplication is then field addition.

use rand::Rng;

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::filtration::PrimeChar;
use crate::repcore::{EchelonBasis, Fq, FqContext, FqMatrix};

/// Default bound on `|G(P)|` for the bar-resolution computation.
pub const DEFAULT_WORK_LIMIT: u64 = 125;

/// Above this order the representation property is sampled, not exhausted.
const EXHAUSTIVE_PAIRS: u32 = 343;
const SAMPLED_PAIRS: usize = 20_000;

/// Local data `(t, alpha_1, alpha_2)` at a weakly ramified point.
#[derive(Debug, Clone)]
pub struct SigmaLocal {
    field: FqContext,
    /// `alpha_1` on the generators.
    alpha1: Vec<Fq>,
    /// `alpha_2` on every group element, indexed by its code.
    alpha2: Vec<Fq>,
}

impl SigmaLocal {
    /// `alpha_1` sends the generators to `1, x, ..., x^(t-1)` and
    /// `alpha_2 = alpha_1^2`.
    pub fn standard(field: FqContext) -> Self {
        let alpha1: Vec<Fq> = (0..field.degree()).map(|i| field.monomial(i)).collect();
        let alpha2 = (0..field.size())
            .map(|g| {
                let a = eval_additive(&field, &alpha1, g);
                field.mul(a, a)
            })
            .collect();
        SigmaLocal { field, alpha1, alpha2 }
    }

    /// `alpha_2 = alpha_1^2 + beta` for a random additive `beta`.
    pub fn with_random_shift<R: Rng + ?Sized>(field: FqContext, rng: &mut R) -> Self {
        let mut local = Self::standard(field);
        let beta: Vec<Fq> = (0..local.t()).map(|_| local.field.random_element(rng)).collect();
        for g in 0..local.field.size() {
            let shift = eval_additive(&local.field, &beta, g);
            local.alpha2[g as usize] = local.field.add(local.alpha2[g as usize], shift);
        }
        local
    }

    /// Arbitrary input, checked for injectivity of `alpha_1` and the
    /// cocycle rule `alpha_2(gh) = alpha_2(g) + alpha_2(h) + 2 alpha_1(g) alpha_1(h)`.
    pub fn custom(field: FqContext, alpha1: Vec<Fq>, alpha2: Vec<Fq>) -> Result<Self> {
        let t = field.degree() as usize;
        let q = field.size();
        if alpha1.len() != t || alpha2.len() != q as usize {
            return Err(Error::InvalidAction(format!(
                "expected {t} generator images and {q} values of alpha_2"
            )));
        }
        if alpha1.iter().chain(&alpha2).any(|a| a.0 >= q) {
            return Err(Error::InvalidAction("value outside the field".into()));
        }
        let local = SigmaLocal { field, alpha1, alpha2 };
        for g in 1..q {
            if local.alpha1(g).is_zero() {
                return Err(Error::InvalidAction(format!("alpha_1 vanishes on element {g}")));
            }
        }
        let f = &local.field;
        let two = f.from_int(2);
        for g in 0..q {
            for h in 0..q {
                let lhs = local.alpha2[local.compose(g, h) as usize];
                let cross = f.mul(two, f.mul(local.alpha1(g), local.alpha1(h)));
                let rhs = f.add(f.add(local.alpha2[g as usize], local.alpha2[h as usize]), cross);
                if lhs != rhs {
                    return Err(Error::InvalidAction(format!(
                        "alpha_2 fails the cocycle rule at ({g}, {h})"
                    )));
                }
            }
        }
        Ok(local)
    }

    pub fn field(&self) -> &FqContext {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn t(&self) -> u32 {
        self.field.degree()
    }

    /// `|G(P)| = p^t`.
    pub fn order(&self) -> u32 {
        self.field.size()
    }

    pub fn alpha1(&self, g: u32) -> Fq {
        eval_additive(&self.field, &self.alpha1, g)
    }

    pub fn alpha2(&self, g: u32) -> Fq {
        self.alpha2[g as usize]
    }

    /// Product of two group elements, by code.
    pub fn compose(&self, g: u32, h: u32) -> u32 {
        self.field.add(Fq(g), Fq(h)).0
    }

    /// Matrix of `g` on `(omega_1, omega_2, omega_3)`, columns are images.
    pub fn action_matrix(&self, g: u32) -> FqMatrix {
        let f = &self.field;
        let a = self.alpha1(g);
        let b = self.alpha2(g);
        let two_a = f.mul(f.from_int(2), a);
        FqMatrix::from_rows(vec![
            vec![Fq::ONE, Fq::ZERO, Fq::ZERO],
            vec![a, Fq::ONE, Fq::ZERO],
            vec![b, two_a, Fq::ONE],
        ])
    }

    /// `M(gh) = M(g) M(h)`, over all pairs for small groups and on a
    /// deterministic sample otherwise.
    pub fn is_representation(&self) -> bool {
        let q = self.order();
        let mats: Vec<FqMatrix> = (0..q).map(|g| self.action_matrix(g)).collect();
        let check = |g: u32, h: u32| {
            mats[self.compose(g, h) as usize] == mats[g as usize].mul(&mats[h as usize], &self.field)
        };
        if q <= EXHAUSTIVE_PAIRS {
            (0..q).all(|g| (0..q).all(|h| check(g, h)))
        } else {
            // a fixed linear congruential walk keeps this reproducible
            let mut state: u64 = 0x2545_f491_4f6c_dd1d;
            (0..SAMPLED_PAIRS).all(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let g = ((state >> 33) % q as u64) as u32;
                let h = ((state >> 13) % q as u64) as u32;
                check(g, h)
            })
        }
    }
}

fn eval_additive(f: &FqContext, images: &[Fq], g: u32) -> Fq {
    let p = f.p();
    let mut rest = g;
    let mut acc = Fq::ZERO;
    for &img in images {
        let digit = rest % p;
        rest /= p;
        if digit != 0 {
            acc = f.add(acc, f.mul(f.from_int(digit as i64), img));
        }
    }
    acc
}

/// `dim (Sigma_P)_G = 3 - rank` of the stacked `M(g) - 1`.
pub fn h0_sigma(local: &SigmaLocal) -> usize {
    let f = local.field();
    let mut basis = EchelonBasis::new(3);
    for g in 1..local.order() {
        let n = local.action_matrix(g).sub(&FqMatrix::identity(3), f);
        for c in 0..3 {
            basis.insert(n.column(c), f);
        }
    }
    3 - basis.rank()
}

/// Ranks of the normalized bar complex `C_2 -> C_1 -> C_0` with
/// `C_n = Sigma_P (x) k[(G \ 1)^n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarRanks {
    pub dim_c1: usize,
    pub rank_d1: usize,
    pub rank_d2: usize,
}

impl BarRanks {
    pub fn h0(&self) -> usize {
        3 - self.rank_d1
    }

    pub fn kernel_d1(&self) -> usize {
        self.dim_c1 - self.rank_d1
    }

    pub fn h1(&self) -> usize {
        self.kernel_d1() - self.rank_d2
    }
}

/// `partial_1(m [g]) = (g - 1) m`,
/// `partial_2(m [g|h]) = g m [h] - m [gh] + m [g]` with `[1] = 0`.
///
/// `partial_2` is streamed column by column into an echelon basis, so only
/// `C_1`-sized vectors are ever held.
pub fn h1_sigma_bar(local: &SigmaLocal, work_limit: u64) -> Result<BarRanks> {
    let q = local.order();
    if q as u64 > work_limit {
        return Err(Error::WorkLimitExceeded {
            order: q as u64,
            limit: work_limit,
        });
    }
    let f = local.field();
    let mats: Vec<FqMatrix> = (0..q).map(|g| local.action_matrix(g)).collect();
    let n = q as usize - 1;
    let dim_c1 = 3 * n;
    // block of [g] in C_1, g != 0
    let block = |g: u32| 3 * (g as usize - 1);

    let mut d1 = FqMatrix::zeros(3, dim_c1);
    for g in 1..q {
        let diff = mats[g as usize].sub(&FqMatrix::identity(3), f);
        for r in 0..3 {
            for c in 0..3 {
                d1.set(r, block(g) + c, diff.get(r, c));
            }
        }
    }
    let rank_d1 = d1.rank(f);
    let kernel = dim_c1 - rank_d1;

    let mut image = EchelonBasis::new(dim_c1);
    'outer: for g in 1..q {
        let m = &mats[g as usize];
        for h in 1..q {
            let gh = local.compose(g, h);
            for i in 0..3 {
                let mut col = vec![Fq::ZERO; dim_c1];
                for r in 0..3 {
                    col[block(h) + r] = m.get(r, i);
                }
                if gh != 0 {
                    let at = block(gh) + i;
                    col[at] = f.sub(col[at], Fq::ONE);
                }
                let at = block(g) + i;
                col[at] = f.add(col[at], Fq::ONE);
                image.insert(col, f);
                // the image sits inside ker partial_1
                if image.rank() == kernel {
                    break 'outer;
                }
            }
        }
    }
    Ok(BarRanks {
        dim_c1,
        rank_d1,
        rank_d2: image.rank(),
    })
}

/// `H_0` and `H_1` of `Sigma_P` for a given `(p, t)`, from a fixed
/// field and `alpha_2 = alpha_1^2`.
pub fn local_homology(p: PrimeChar, t: u32, work_limit: u64) -> Result<BarRanks> {
    let local = SigmaLocal::standard(FqContext::first(p, t)?);
    h1_sigma_bar(&local, work_limit)
}

fn require_weak(spec: &CoverSpec) -> Result<()> {
    if let Some(b) = spec.branch().iter().find(|b| !b.filt.is_weak()) {
        return Err(Error::NotWeaklyRamified(b.label.clone()));
    }
    Ok(())
}

/// Covariants of the projective part, `3(g_Y - 1) + 3r`.
pub fn dim_projective_part(spec: &CoverSpec) -> i64 {
    3 * (spec.g_y() - 1) + 3 * spec.r()
}

/// The pieces of `dim H^1 = H_1(G, Sigma') + projective - H_0(G, Sigma')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakAssembly {
    pub h1_total: i64,
    pub projective: i64,
    pub h0_total: i64,
}

impl WeakAssembly {
    pub fn value(&self) -> i64 {
        self.h1_total + self.projective - self.h0_total
    }
}

/// Assembly with per-point `(H_0, H_1)` supplied by `local(t)`.
pub fn weak_assembly<F>(spec: &CoverSpec, mut local: F) -> Result<WeakAssembly>
where
    F: FnMut(u32) -> Result<(i64, i64)>,
{
    require_weak(spec)?;
    let mut h0_total = 0;
    let mut h1_total = 0;
    for b in spec.branch() {
        let (h0, h1) = local(b.k())?;
        h0_total += h0;
        h1_total += h1;
    }
    Ok(WeakAssembly {
        h1_total,
        projective: dim_projective_part(spec),
        h0_total,
    })
}

/// `3g_Y - 3 + r + sum_j t_j`, checked against the assembly with the
/// local values `H_0 = 1`, `H_1 = t - 1`.
pub fn dim_h1_weak(spec: &CoverSpec) -> Result<i64> {
    require_weak(spec)?;
    spec.require_genus_at_least_two()?;
    let closed = 3 * spec.g_y() - 3 + spec.r() + spec.branch().iter().map(|b| b.k() as i64).sum::<i64>();
    let assembled = weak_assembly(spec, |t| Ok((1, t as i64 - 1)))?.value();
    if closed != assembled {
        return Err(Error::InternalMismatch {
            what: "weak closed form vs assembly",
            lhs: closed,
            rhs: assembled,
        });
    }
    Ok(closed)
}

/// Assembly with `H_0` and `H_1` taken from the bar resolution, one
/// computation per distinct `t`.
pub fn weak_assembly_computed(spec: &CoverSpec, work_limit: u64) -> Result<WeakAssembly> {
    let mut cache = std::collections::BTreeMap::new();
    weak_assembly(spec, |t| {
        if let Some(&v) = cache.get(&t) {
            return Ok(v);
        }
        let r = local_homology(spec.p(), t, work_limit)?;
        let v = (r.h0() as i64, r.h1() as i64);
        cache.insert(t, v);
        Ok(v)
    })
}
