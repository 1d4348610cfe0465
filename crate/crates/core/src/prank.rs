//! The Cartier-operator split of `Omega_X(-D*)` into semisimple and
//! nilpotent parts, and the tangent-space dimension in terms of the
//! nilpotent covariants.
//!
//! The semisimple part is free, `V_(D*) = k[G]^B`, and `B` is reached in two
//! ways: directly from `(g_Y, gamma_Y, r)`, and through Subrao's formula
//! combined with Deuring-Shafarevich.

use num_rational::Ratio;

use crate::cover::CoverSpec;
use crate::error::{Error, Result};

/// `dim Omega_X(-D*_red)^s = gamma_X + deg D*_red - 1`.
pub fn semisimple_dim_subrao(gamma_x: i64, deg_dred: i64) -> Result<i64> {
    if deg_dred < 1 {
        return Err(Error::DomainError(format!(
            "reduced divisor of degree {deg_dred} has empty support"
        )));
    }
    Ok(gamma_x + deg_dred - 1)
}

fn require_base(spec: &CoverSpec) -> Result<i64> {
    let gamma_y = spec
        .gamma_y()
        .ok_or_else(|| Error::DomainError("base p-rank not given".into()))?;
    if spec.g_y() < 1 {
        return Err(Error::DomainError("the p-rank route needs g_Y >= 1".into()));
    }
    Ok(gamma_y)
}

/// `B = 2(g_Y - 1) + gamma_Y - 1 + r`.
pub fn borne_invariant_b(spec: &CoverSpec) -> Result<i64> {
    let gamma_y = require_base(spec)?;
    let b = 2 * (spec.g_y() - 1) + gamma_y - 1 + spec.r();
    if b < 0 {
        return Err(Error::NegativeB(b));
    }
    spec.require_genus_at_least_two()?;
    Ok(b)
}

/// `deg D*_red = |G|(2g_Y - 2) + sum_i |G| / e_0(b_i)`: one point for every
/// point of `X` above a zero or pole of the base differential, and one for
/// each point above a branch point.
pub fn dred_degree(spec: &CoverSpec) -> Result<i64> {
    borne_invariant_b(spec)?;
    let order = spec.group_order();
    let orbits: i64 = spec.branch().iter().map(|b| spec.orbit_size(b)).sum();
    Ok(order * (2 * spec.g_y() - 2) + orbits)
}

/// `3g_X - 3 - |G| B`.
pub fn nilpotent_dim(spec: &CoverSpec) -> Result<i64> {
    let n = spec.total_dim_2differentials()? - spec.group_order() * borne_invariant_b(spec)?;
    if n < 0 {
        return Err(Error::NegativeDimension(n));
    }
    Ok(n)
}

/// `B + dim Omega_X(-D*)^n_G` for caller-supplied nilpotent covariants.
pub fn dim_h1_prank(spec: &CoverSpec, n_covariants: i64) -> Result<i64> {
    if n_covariants < 0 {
        return Err(Error::NegativeDimension(n_covariants));
    }
    Ok(borne_invariant_b(spec)? + n_covariants)
}

/// The unsimplified expression
/// `|G|(g_Y - gamma_Y) + |G| sum_i sum_nu (e_nu(b_i) - 1)/e_0 - r`
/// for the nilpotent dimension, kept for side-by-side comparison.
pub fn nilpotent_display(spec: &CoverSpec) -> Result<Ratio<i64>> {
    let gamma_y = require_base(spec)?;
    borne_invariant_b(spec)?;
    let order = spec.group_order();
    let mut value = Ratio::from_integer(order * (spec.g_y() - gamma_y) - spec.r());
    for b in spec.branch() {
        value += Ratio::new(order * b.filt.different_exponent(), b.e0());
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrankReport {
    pub b: i64,
    pub semisimple_dim: i64,
    pub nilpotent_dim: i64,
    pub gamma_x: i64,
    pub deg_dred: i64,
    /// `gamma_X + deg D*_red - 1`, to be compared with `semisimple_dim`.
    pub subrao_dim: i64,
}

impl PrankReport {
    pub fn new(spec: &CoverSpec) -> Result<Self> {
        let b = borne_invariant_b(spec)?;
        let gamma_x = spec.prank_top()?;
        let deg_dred = dred_degree(spec)?;
        let subrao_dim = semisimple_dim_subrao(gamma_x, deg_dred)?;
        Ok(PrankReport {
            b,
            semisimple_dim: spec.group_order() * b,
            nilpotent_dim: nilpotent_dim(spec)?,
            gamma_x,
            deg_dred,
            subrao_dim,
        })
    }

    /// `dim H^1` as a function of the nilpotent covariants.
    pub fn dim_h1_given(&self, n_covariants: i64) -> i64 {
        self.b + n_covariants
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{BranchPoint, GroupShape};
    use crate::filtration::{LowerFiltration, PrimeChar};

    fn p(n: u32) -> PrimeChar {
        PrimeChar::new(n).unwrap()
    }

    fn spec(pp: u32, v: u32, g_y: i64, gamma_y: i64, pts: &[(u32, &[i64])]) -> CoverSpec {
        let branch = pts
            .iter()
            .enumerate()
            .map(|(i, (k, j))| {
                BranchPoint::new(format!("P{i}"), LowerFiltration::new(p(pp), *k, j.to_vec()).unwrap())
            })
            .collect();
        CoverSpec::new(p(pp), GroupShape::Cyclic(v), g_y, Some(gamma_y), branch).unwrap()
    }

    #[test]
    fn subrao_examples() {
        assert_eq!(semisimple_dim_subrao(4, 7).unwrap(), 10);
        assert_eq!(semisimple_dim_subrao(1, 1).unwrap(), 1);
        assert!(semisimple_dim_subrao(1, 0).is_err());
    }

    #[test]
    fn b_examples() {
        assert_eq!(borne_invariant_b(&spec(3, 1, 1, 1, &[(1, &[1])])).unwrap(), 1);
        assert_eq!(borne_invariant_b(&spec(3, 1, 2, 0, &[(1, &[1]), (1, &[2])])).unwrap(), 3);
    }

    #[test]
    fn negative_b() {
        let s = spec(3, 1, 1, 0, &[]);
        assert_eq!(borne_invariant_b(&s), Err(Error::NegativeB(-1)));
    }

    #[test]
    fn g_y_zero_is_rejected() {
        let s = spec(3, 1, 0, 0, &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert!(matches!(borne_invariant_b(&s), Err(Error::DomainError(_))));
    }

    #[test]
    fn dred_examples() {
        assert_eq!(dred_degree(&spec(3, 1, 1, 1, &[(1, &[1])])).unwrap(), 1);
        assert_eq!(dred_degree(&spec(3, 2, 1, 0, &[(1, &[2])])).unwrap(), 3);
        assert_eq!(dred_degree(&spec(3, 1, 2, 1, &[(1, &[1]), (1, &[1])])).unwrap(), 8);
    }

    #[test]
    fn nilpotent_example() {
        let s = spec(3, 1, 1, 1, &[(1, &[1])]);
        assert_eq!(s.genus_top().unwrap(), 3);
        assert_eq!(nilpotent_dim(&s).unwrap(), 3);
        let r = PrankReport::new(&s).unwrap();
        assert_eq!(r.semisimple_dim, r.subrao_dim);
        assert_eq!(r.semisimple_dim + r.nilpotent_dim, 6);
    }

    #[test]
    fn h1_given_n() {
        let s = spec(3, 1, 1, 1, &[(1, &[1])]);
        assert_eq!(dim_h1_prank(&s, 2).unwrap(), 3);
        let s = spec(3, 1, 2, 0, &[(1, &[1]), (1, &[2])]);
        assert_eq!(dim_h1_prank(&s, 0).unwrap(), 3);
    }

    #[test]
    fn display_example() {
        let s = spec(3, 1, 1, 1, &[(1, &[1])]);
        let shown = nilpotent_display(&s).unwrap();
        // 3*0 - 1 + 3*4/3 = 3
        assert_eq!(shown, Ratio::from_integer(3));
    }
}
