//! Modules over `k[Z/p^v]`, given by the matrix of a generator `sigma`.
//!
//! Over a field of characteristic p every such module is a sum of Jordan
//! blocks `V_j` (`1 <= j <= p^v`) for the eigenvalue 1, and the
//! multiplicities are recovered from the ranks of `(sigma - 1)^i`.

use crate::error::{Error, Result};

use super::field::{Fq, FqContext};
use super::matrix::FqMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicModule {
    /// Group order is `p^v`.
    v: u32,
    generator: FqMatrix,
}

impl CyclicModule {
    pub fn new(v: u32, generator: FqMatrix) -> Result<Self> {
        if generator.rows() != generator.cols() {
            return Err(Error::DomainError("generator must be square".into()));
        }
        Ok(CyclicModule { v, generator })
    }

    /// The indecomposable `V_j`: `sigma e_l = e_l + e_(l-1)`, `e_0 = 0`.
    pub fn indecomposable(v: u32, j: usize) -> Self {
        let mut g = FqMatrix::identity(j);
        for l in 1..j {
            g.set(l - 1, l, Fq::ONE);
        }
        CyclicModule { v, generator: g }
    }

    /// `V_(p^v)`, the regular module.
    pub fn regular(f: &FqContext, v: u32) -> Self {
        Self::indecomposable(v, (f.p() as usize).pow(v))
    }

    /// `sigma` acting trivially on a `d`-dimensional space.
    pub fn trivial(v: u32, d: usize) -> Self {
        CyclicModule {
            v,
            generator: FqMatrix::identity(d),
        }
    }

    /// `bigoplus_j V_j^(m_j)` with `m` indexed from `j = 1`.
    pub fn from_multiplicities(v: u32, m: &[usize]) -> Self {
        let mut g = FqMatrix::zeros(0, 0);
        for (idx, &count) in m.iter().enumerate() {
            for _ in 0..count {
                g = g.direct_sum(&Self::indecomposable(v, idx + 1).generator);
            }
        }
        CyclicModule { v, generator: g }
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &FqMatrix {
        &self.generator
    }

    pub fn direct_sum(&self, other: &CyclicModule) -> CyclicModule {
        assert_eq!(self.v, other.v, "modules over different groups");
        CyclicModule {
            v: self.v,
            generator: self.generator.direct_sum(&other.generator),
        }
    }

    fn nilpotent_part(&self, f: &FqContext) -> FqMatrix {
        self.generator.sub(&FqMatrix::identity(self.dim()), f)
    }

    /// Ranks `r_0 = d, r_1, ..., r_(p^v + 1)` of the powers of `sigma - 1`.
    fn power_ranks(&self, f: &FqContext) -> Result<Vec<usize>> {
        let order = (f.p() as usize).pow(self.v);
        let n = self.nilpotent_part(f);
        let mut ranks = vec![self.dim()];
        let mut power = FqMatrix::identity(self.dim());
        for _ in 0..=order {
            power = power.mul(&n, f);
            ranks.push(power.rank(f));
        }
        if ranks[order] != 0 {
            return Err(Error::NotUnipotent);
        }
        Ok(ranks)
    }

    /// Multiplicities `m_1, ..., m_(p^v)` of the Jordan blocks `V_j`.
    pub fn jordan_multiplicities(&self, f: &FqContext) -> Result<Vec<usize>> {
        let r = self.power_ranks(f)?;
        let order = r.len() - 2;
        let m: Vec<usize> = (1..=order)
            .map(|j| {
                let second = r[j - 1] as i64 - 2 * r[j] as i64 + r[j + 1] as i64;
                debug_assert!(second >= 0);
                second as usize
            })
            .collect();
        debug_assert_eq!(
            m.iter().enumerate().map(|(i, c)| (i + 1) * c).sum::<usize>(),
            self.dim()
        );
        Ok(m)
    }

    /// `dim M_G = d - rank(sigma - 1)`.
    pub fn covariants_dim(&self, f: &FqContext) -> Result<usize> {
        let r = self.power_ranks(f)?;
        Ok(r[0] - r[1])
    }
}

/// `Ind_H^G M` for `H = <sigma^(p^(v-s))>` of order `p^s` inside `G = Z/p^v`.
///
/// The space is `p^(v-s)` copies of `M`; `sigma` shifts block `i` to block
/// `i + 1` and sends the last block back to the first through the action of
/// the generator of `H` on `M`.
pub fn induced_module(f: &FqContext, v: u32, base: &CyclicModule) -> Result<CyclicModule> {
    let s = base.v();
    if s > v {
        return Err(Error::DomainError(format!("subgroup exponent {s} exceeds {v}")));
    }
    let blocks = (f.p() as usize).pow(v - s);
    let d = base.dim();
    let mut g = FqMatrix::zeros(blocks * d, blocks * d);
    for b in 0..blocks {
        let target = (b + 1) % blocks;
        for r in 0..d {
            for c in 0..d {
                let val = if target == 0 {
                    base.generator().get(r, c)
                } else if r == c {
                    Fq::ONE
                } else {
                    Fq::ZERO
                };
                g.set(target * d + r, b * d + c, val);
            }
        }
    }
    CyclicModule::new(v, g)
}

/// Shapiro's lemma in degree 0: `dim (Ind M)_G = dim M_H`.
pub fn shapiro_check(f: &FqContext, v: u32, base: &CyclicModule) -> Result<bool> {
    let ind = induced_module(f, v, base)?;
    Ok(ind.covariants_dim(f)? == base.covariants_dim(f)?)
}
