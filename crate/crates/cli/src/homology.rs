//! Repeated `H_0`/`H_1` computations for one `(p, t)` under random choices
//! of the field modulus and of `alpha_2`.

use std::fmt::Write as _;

use anyhow::Result;
use deftan::repcore::FqContext;
use deftan::weakly::{h1_sigma_bar, SigmaLocal};
use deftan::PrimeChar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub modulus: Vec<u32>,
    pub shifted: bool,
    pub h0: usize,
    pub h1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyRun {
    pub p: u32,
    pub t: u32,
    pub trials: Vec<Trial>,
}

impl HomologyRun {
    pub fn consistent(&self) -> bool {
        self.trials.windows(2).all(|w| (w[0].h0, w[0].h1) == (w[1].h0, w[1].h1))
    }
}

/// Trial 0 uses the first irreducible modulus and `alpha_2 = alpha_1^2`;
/// later trials draw both at random.
pub fn run(p: u32, t: u32, trials: usize, seed: u64, work_limit: u64) -> Result<HomologyRun> {
    let pc = PrimeChar::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for i in 0..trials {
        let local = if i == 0 {
            SigmaLocal::standard(FqContext::first(pc, t)?)
        } else {
            let field = FqContext::random(pc, t, &mut rng)?;
            SigmaLocal::with_random_shift(field, &mut rng)
        };
        let ranks = h1_sigma_bar(&local, work_limit)?;
        out.push(Trial {
            modulus: local.field().modulus().to_vec(),
            shifted: i > 0,
            h0: ranks.h0(),
            h1: ranks.h1(),
        });
    }
    Ok(HomologyRun { p, t, trials: out })
}

pub fn run_text(r: &HomologyRun) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "G(P) = (Z/{})^{}, |G(P)| = {}", r.p, r.t, (r.p as u64).pow(r.t));
    for (i, trial) in r.trials.iter().enumerate() {
        let _ = writeln!(
            out,
            "trial {i}: modulus {:?}, alpha_2 {}: H_0 = {}, H_1 = {}",
            trial.modulus,
            if trial.shifted { "alpha_1^2 + additive" } else { "alpha_1^2" },
            trial.h0,
            trial.h1
        );
    }
    let _ = writeln!(out, "expected by the closed form: H_0 = 1, H_1 = {}", r.t - 1);
    if let Some(first) = r.trials.first() {
        if first.h1 != r.t as usize - 1 {
            let _ = writeln!(out, "note: computed H_1 = {} differs from t - 1 = {}", first.h1, r.t - 1);
        }
    }
    if !r.consistent() {
        let _ = writeln!(out, "note: results depend on the choices");
    }
    out
}
