//! Whole-cover invariants of `X -> Y = X/G` for a p-group `G`.
//!
//! A [`CoverSpec`] lists one [`BranchPoint`] per branch point of `Y`; the
//! number of points of `X` above it is `|G| / e_0`. The top genus is always
//! derived through Riemann-Hurwitz, never supplied.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::filtration::{delta_iter, LowerFiltration, PrimeChar, Violation, MAX_GROUP_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupShape {
    /// `Z/p^v`.
    Cyclic(u32),
    /// `(Z/p)^t`.
    ElementaryAbelian(u32),
    /// A group of order `p^n` with unspecified structure.
    GenericPGroup(u32),
}

impl GroupShape {
    /// Exponent `e` with `|G| = p^e`.
    pub fn log_order(self) -> u32 {
        match self {
            GroupShape::Cyclic(v) | GroupShape::ElementaryAbelian(v) | GroupShape::GenericPGroup(v) => v,
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, GroupShape::Cyclic(_))
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupShape::Cyclic(_) => "cyclic",
            GroupShape::ElementaryAbelian(_) => "elementary",
            GroupShape::GenericPGroup(_) => "pgroup",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchPoint {
    pub label: String,
    pub filt: LowerFiltration,
}

impl BranchPoint {
    pub fn new(label: impl Into<String>, filt: LowerFiltration) -> Self {
        BranchPoint {
            label: label.into(),
            filt,
        }
    }

    pub fn e0(&self) -> i64 {
        self.filt.e0()
    }

    pub fn k(&self) -> u32 {
        self.filt.k()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverSpec {
    p: PrimeChar,
    group: GroupShape,
    g_y: i64,
    gamma_y: Option<i64>,
    branch: Vec<BranchPoint>,
}

impl CoverSpec {
    pub fn new(
        p: PrimeChar,
        group: GroupShape,
        g_y: i64,
        gamma_y: Option<i64>,
        branch: Vec<BranchPoint>,
    ) -> Result<Self> {
        let log_order = group.log_order();
        if log_order == 0 {
            return Err(Error::InvalidSpec("group exponent/rank must be positive".into()));
        }
        if p.checked_pow(log_order).map_or(true, |o| o > MAX_GROUP_ORDER) {
            return Err(Error::InvalidSpec("group order out of supported range".into()));
        }
        if g_y < 0 {
            return Err(Error::InvalidSpec(format!("negative base genus {g_y}")));
        }
        if let Some(gamma) = gamma_y {
            if gamma < 0 || gamma > g_y {
                return Err(Error::InvalidSpec(format!(
                    "base p-rank {gamma} outside 0..={g_y}"
                )));
            }
        }
        let mut labels = BTreeSet::new();
        for b in &branch {
            if !labels.insert(b.label.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate label {:?}", b.label)));
            }
            if b.filt.p() != p {
                return Err(Error::InvalidSpec(format!(
                    "branch point {} uses a different characteristic",
                    b.label
                )));
            }
            if b.k() > log_order {
                return Err(Error::InvalidSpec(format!(
                    "branch point {}: |G(P)| = p^{} exceeds |G| = p^{log_order}",
                    b.label,
                    b.k()
                )));
            }
            match group {
                GroupShape::Cyclic(_) => {
                    if !b.filt.is_cyclic() {
                        return Err(Error::InvalidSpec(format!(
                            "branch point {}: a cyclic decomposition group needs one jump per step",
                            b.label
                        )));
                    }
                    if let Some(Violation::HasseArf {
                        index,
                        numerator,
                        denominator,
                    }) = b.filt.validate(false).violations.first()
                    {
                        return Err(Error::HasseArfViolation {
                            index: *index,
                            numerator: *numerator,
                            denominator: *denominator,
                        });
                    }
                }
                GroupShape::ElementaryAbelian(_) | GroupShape::GenericPGroup(_) => {
                    if b.filt.jumps().len() != 1 {
                        return Err(Error::InvalidSpec(format!(
                            "branch point {}: only single-jump filtrations are supported for non-cyclic groups",
                            b.label
                        )));
                    }
                }
            }
        }
        Ok(CoverSpec {
            p,
            group,
            g_y,
            gamma_y,
            branch,
        })
    }

    pub fn p(&self) -> PrimeChar {
        self.p
    }

    pub fn group(&self) -> GroupShape {
        self.group
    }

    pub fn g_y(&self) -> i64 {
        self.g_y
    }

    pub fn gamma_y(&self) -> Option<i64> {
        self.gamma_y
    }

    pub fn branch(&self) -> &[BranchPoint] {
        &self.branch
    }

    /// Number of branch points of `Y`.
    pub fn r(&self) -> i64 {
        self.branch.len() as i64
    }

    pub fn group_order(&self) -> i64 {
        self.p.pow(self.group.log_order())
    }

    /// Number of points of `X` above the branch point: `|G| / e_0`.
    pub fn orbit_size(&self, b: &BranchPoint) -> i64 {
        self.group_order() / b.e0()
    }

    pub fn is_weakly_ramified(&self) -> bool {
        self.branch.iter().all(|b| b.filt.is_weak())
    }

    pub fn with_gamma_y(&self, gamma_y: Option<i64>) -> Result<Self> {
        Self::new(self.p, self.group, self.g_y, gamma_y, self.branch.clone())
    }

    /// Degree of the ramification divisor `R` on `X`.
    pub fn ramification_degree(&self) -> i64 {
        self.branch
            .iter()
            .map(|b| self.orbit_size(b) * b.filt.different_exponent())
            .sum()
    }

    /// Genus of `X` from `2g_X - 2 = |G|(2g_Y - 2) + deg R`.
    pub fn genus_top(&self) -> Result<i64> {
        let twice = self.group_order() * (2 * self.g_y - 2) + self.ramification_degree();
        if twice % 2 != 0 {
            return Err(Error::NonIntegralGenus(twice));
        }
        let g = twice / 2 + 1;
        if g < 0 {
            return Err(Error::NoSuchCover(format!("negative top genus {g}")));
        }
        Ok(g)
    }

    /// Genus of `X` obtained by climbing the cyclic tower one degree-p step
    /// at a time, using the per-level jumps.
    pub fn genus_top_telescoping(&self) -> Result<i64> {
        let v = match self.group {
            GroupShape::Cyclic(v) => v,
            _ => return Err(Error::InvalidSpec("telescoping needs a cyclic group".into())),
        };
        let p = self.p.as_i64();
        // 2g - 2 of X_v = Y, then X_(v-1), ..., X_0 = X
        let mut twice = 2 * self.g_y - 2;
        for n in (1..=v).rev() {
            let mut ram = 0;
            for b in &self.branch {
                if b.k() >= n {
                    // points of X_n above b: p^(v - max(n, k)) = p^(v - k)
                    let count = self.p.pow(v - b.k());
                    ram += count * (p - 1) * (b.filt.level_jump(n)? + 1);
                }
            }
            twice = p * twice + ram;
        }
        if twice % 2 != 0 {
            return Err(Error::NonIntegralGenus(twice));
        }
        Ok(twice / 2 + 1)
    }

    pub fn require_genus_at_least_two(&self) -> Result<i64> {
        let g = self.genus_top()?;
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(g)
    }

    /// p-rank of `X` from the Deuring-Shafarevich formula.
    pub fn prank_top(&self) -> Result<i64> {
        let gamma_y = self
            .gamma_y
            .ok_or_else(|| Error::DomainError("base p-rank not given".into()))?;
        let order = self.group_order();
        // |G| (1 - 1/e_0) = |G| - |G|/e_0 is an integer
        let ram: i64 = self
            .branch
            .iter()
            .map(|b| order - self.orbit_size(b))
            .sum();
        let gamma_x = 1 + order * (gamma_y - 1) + ram;
        if gamma_x < 0 {
            return Err(Error::NoSuchCover(format!(
                "Deuring-Shafarevich gives p-rank {gamma_x}"
            )));
        }
        Ok(gamma_x)
    }

    /// Divisor `A` on `Y`: `floor(sum_nu (e_nu - 1) / e_0)` at each branch point.
    pub fn divisor_a(&self) -> Result<BTreeMap<String, i64>> {
        self.require_genus_at_least_two()?;
        Ok(self
            .branch
            .iter()
            .map(|b| (b.label.clone(), b.filt.different_exponent().div_euclid(b.e0())))
            .collect())
    }

    /// `l(K + A) = g_Y - 1 + deg A`.
    pub fn ell_k_plus_a(&self) -> Result<i64> {
        let deg_a: i64 = self.divisor_a()?.values().sum();
        let ell = self.g_y - 1 + deg_a;
        if ell < 1 {
            return Err(Error::ExistenceFailure(ell));
        }
        Ok(ell)
    }

    /// `deg D* = 2g_X - 2`.
    pub fn dstar_degree(&self) -> Result<i64> {
        Ok(2 * self.require_genus_at_least_two()? - 2)
    }

    /// Dimension of the global 2-differentials, `3g_X - 3`.
    pub fn total_dim_2differentials(&self) -> Result<i64> {
        let g = self.require_genus_at_least_two()?;
        let via_riemann_roch = 2 * self.dstar_degree()? + 1 - g;
        debug_assert_eq!(via_riemann_roch, 3 * g - 3);
        Ok(via_riemann_roch)
    }

    /// `dim Omega_X(-D*)` as the rational value
    /// `(3g_Y - 3)|G| + |G| sum_i sum_nu (e_nu(b_i) - 1)/e_0(b_i)`,
    /// kept for comparison with `3g_X - 3`.
    pub fn two_differentials_display(&self) -> num_rational::Ratio<i64> {
        let order = self.group_order();
        let mut value = num_rational::Ratio::from_integer((3 * self.g_y - 3) * order);
        for b in &self.branch {
            value += num_rational::Ratio::new(order * b.filt.different_exponent(), b.e0());
        }
        value
    }

    /// Coefficients `4(e_0 - 1) + 3` of `2K + sum 3P` at the weakly ramified points.
    pub fn weak_projective_coefficients(&self) -> BTreeMap<String, i64> {
        self.branch
            .iter()
            .map(|b| (b.label.clone(), 4 * (b.e0() - 1) + 3))
            .collect()
    }
}

/// Koeck's criterion: `n_P = -1 mod e_0(P)` at every wildly ramified point.
/// Labels not present in `coeff` count as coefficient 0; labels that are not
/// branch points impose nothing.
pub fn koeck_projective_check(coeff: &BTreeMap<String, i64>, spec: &CoverSpec) -> bool {
    spec.branch().iter().all(|b| {
        let e0 = b.e0();
        e0 == 1 || coeff.get(&b.label).copied().unwrap_or(0).rem_euclid(e0) == e0 - 1
    })
}

/// `Delta^k(d_P)` for every branch point, in spec order.
pub fn delta_k_d_p_all(spec: &CoverSpec) -> Vec<i64> {
    spec.branch()
        .iter()
        .map(|b| delta_iter(b.filt.d_p(), b.k(), spec.p()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> PrimeChar {
        PrimeChar::new(n).unwrap()
    }

    fn cyclic(pp: u32, v: u32, g_y: i64, gamma: Option<i64>, pts: &[(u32, &[i64])]) -> CoverSpec {
        let branch = pts
            .iter()
            .enumerate()
            .map(|(i, (k, j))| {
                BranchPoint::new(format!("P{i}"), LowerFiltration::new(p(pp), *k, j.to_vec()).unwrap())
            })
            .collect();
        CoverSpec::new(p(pp), GroupShape::Cyclic(v), g_y, gamma, branch).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(cyclic(3, 1, 2, None, &[]).genus_top().unwrap(), 4);
        let e2 = cyclic(3, 1, 0, None, &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert_eq!(e2.genus_top().unwrap(), 4);
        let e1 = cyclic(3, 2, 1, None, &[(2, &[1, 4])]);
        assert_eq!(e1.genus_top().unwrap(), 12);
        assert_eq!(e1.ramification_degree(), 22);
    }

    #[test]
    fn telescoping_matches_one_shot() {
        let e1 = cyclic(3, 2, 1, None, &[(2, &[1, 4])]);
        assert_eq!(e1.genus_top_telescoping().unwrap(), 12);
        let mixed = cyclic(5, 3, 0, None, &[(3, &[2, 12, 62]), (1, &[3]), (2, &[1, 6])]);
        assert_eq!(
            mixed.genus_top_telescoping().unwrap(),
            mixed.genus_top().unwrap()
        );
    }

    #[test]
    fn prank_examples() {
        assert_eq!(cyclic(3, 1, 1, Some(1), &[]).prank_top().unwrap(), 1);
        let e2 = cyclic(3, 1, 0, Some(0), &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert_eq!(e2.prank_top().unwrap(), 4);
        assert!(matches!(
            cyclic(3, 1, 0, Some(0), &[]).prank_top(),
            Err(Error::NoSuchCover(_))
        ));
    }

    #[test]
    fn divisor_a_examples() {
        let s = cyclic(3, 1, 1, None, &[(1, &[1])]);
        // g_X = 3 here
        assert_eq!(s.divisor_a().unwrap()["P0"], 1);
        assert_eq!(s.ell_k_plus_a().unwrap(), 1);
        let e1 = cyclic(3, 2, 1, None, &[(2, &[1, 4])]);
        assert_eq!(e1.divisor_a().unwrap()["P0"], 2);
        assert_eq!(e1.ell_k_plus_a().unwrap(), 2);
        let e2 = cyclic(3, 1, 0, None, &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert_eq!(e2.divisor_a().unwrap().values().sum::<i64>(), 3);
        assert_eq!(e2.ell_k_plus_a().unwrap(), 2);
    }

    #[test]
    fn dstar_and_two_differentials() {
        let e2 = cyclic(3, 1, 0, None, &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert_eq!(e2.dstar_degree().unwrap(), 6);
        assert_eq!(e2.total_dim_2differentials().unwrap(), 9);
        let e1 = cyclic(3, 2, 1, None, &[(2, &[1, 4])]);
        assert_eq!(e1.dstar_degree().unwrap(), 22);
        assert_eq!(e1.total_dim_2differentials().unwrap(), 33);
        // Z/5 over P^1 with one jump N = 2: 2g_X - 2 = -10 + 4 * 3
        let g2 = cyclic(5, 1, 0, None, &[(1, &[2])]);
        assert_eq!(g2.genus_top().unwrap(), 2);
        assert_eq!(g2.dstar_degree().unwrap(), 2);
        assert_eq!(g2.total_dim_2differentials().unwrap(), 3);
    }

    #[test]
    fn genus_below_two_is_rejected_where_required() {
        let s = cyclic(3, 1, 0, None, &[(1, &[1])]);
        assert_eq!(s.genus_top().unwrap(), 0);
        assert_eq!(s.dstar_degree(), Err(Error::GenusTooSmall(0)));
    }

    #[test]
    fn koeck_examples() {
        let spec = cyclic(3, 1, 0, None, &[(1, &[1]), (1, &[1]), (1, &[1])]);
        assert!(koeck_projective_check(&spec.weak_projective_coefficients(), &spec));
        let mut zero = BTreeMap::new();
        zero.insert("P0".to_string(), 0);
        zero.insert("P1".to_string(), 2);
        zero.insert("P2".to_string(), 5);
        assert!(!koeck_projective_check(&zero, &spec));
        let mut elsewhere = spec.weak_projective_coefficients();
        elsewhere.insert("Q".to_string(), 7);
        assert!(koeck_projective_check(&elsewhere, &spec));
    }

    #[test]
    fn spec_validation() {
        let f = LowerFiltration::new(p(3), 2, vec![1, 3]).unwrap();
        let err = CoverSpec::new(p(3), GroupShape::Cyclic(2), 1, None, vec![BranchPoint::new("a", f)]);
        assert!(matches!(err, Err(Error::HasseArfViolation { .. })));
        let f = LowerFiltration::new(p(3), 3, vec![1, 4, 13]).unwrap();
        assert!(CoverSpec::new(p(3), GroupShape::Cyclic(2), 1, None, vec![BranchPoint::new("a", f)]).is_err());
        assert!(CoverSpec::new(p(3), GroupShape::Cyclic(1), 1, Some(2), vec![]).is_err());
        let weak = LowerFiltration::weak(p(3), 2).unwrap();
        assert!(CoverSpec::new(p(3), GroupShape::Cyclic(2), 1, None, vec![BranchPoint::new("a", weak.clone())]).is_err());
        assert!(CoverSpec::new(
            p(3),
            GroupShape::ElementaryAbelian(2),
            1,
            None,
            vec![BranchPoint::new("a", weak.clone()), BranchPoint::new("a", weak)]
        )
        .is_err());
    }
}
