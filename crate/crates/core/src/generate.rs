//! Seeded random populations and mechanisms with bounded-denominator
//! rational entries.
//!
//! Populations are drawn from ChaCha8 stream 0 and mechanisms from stream 1 of
//! the same seed, so a population and its mechanism can be regenerated
//! independently of each other.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AssignmentMechanism, CounterfactualPopulation, CounterfactualStratum, Joint};
use crate::rational::{Probability, Rational};

/// Recorded in output metadata next to the seed.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.3, seed_from_u64)";

const POPULATION_STREAM: u64 = 0;
const MECHANISM_STREAM: u64 = 1;
const COUPLING_STREAM: u64 = 2;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub stratum_count: usize,
    /// Every drawn probability is `k/D` with `D <= denominator_bound`.
    pub denominator_bound: u64,
    pub confounded: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            stratum_count: 3,
            denominator_bound: 1000,
            confounded: false,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.stratum_count == 0 {
            return Err(Error::InvalidConfig("stratum_count must be at least 1".into()));
        }
        if self.denominator_bound < 2 {
            return Err(Error::InvalidConfig("denominator_bound must be at least 2".into()));
        }
        if self.confounded && self.denominator_bound < 3 {
            return Err(Error::InvalidConfig(
                "confounded mechanisms need denominator_bound >= 3".into(),
            ));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

fn frac(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `k/d` with `d` in `[2, bound]` and `k` in `[0, d]`.
fn draw_probability(rng: &mut impl Rng, bound: u64) -> Probability {
    let d = rng.gen_range(2..=bound);
    let k = rng.gen_range(0..=d);
    Probability::new(frac(k, d)).expect("k <= d")
}

/// `k/d` strictly inside `(0, 1)`.
fn draw_interior(rng: &mut impl Rng, bound: u64) -> Probability {
    let d = rng.gen_range(2..=bound);
    let k = rng.gen_range(1..d);
    Probability::new(frac(k, d)).expect("0 < k < d")
}

/// A coupling of the two margins chosen at a random point of its feasible
/// segment.
fn draw_joint(rng: &mut impl Rng, bound: u64, risk0: &Probability, risk1: &Probability) -> Joint {
    let s = CounterfactualStratum::independent("_", Probability::one(), risk0.clone(), risk1.clone());
    let (lo, hi) = s.coupling_bounds();
    let d = rng.gen_range(1..=bound);
    let t = frac(rng.gen_range(0..=d), d);
    let both = &lo + (hi - &lo) * t;
    s.recoupled(both).expect("point of the feasible segment").joint().clone()
}

fn draw_population(cfg: &GeneratorConfig, rng: &mut impl Rng) -> CounterfactualPopulation {
    let bound = cfg.denominator_bound;
    let sizes: Vec<u64> = (0..cfg.stratum_count).map(|_| rng.gen_range(1..=bound)).collect();
    let total: u64 = sizes.iter().sum();
    let strata = sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let risk0 = draw_probability(rng, bound);
            let risk1 = draw_probability(rng, bound);
            let joint = draw_joint(rng, bound, &risk0, &risk1);
            let prevalence = Probability::new(frac(size, total)).expect("size <= total");
            CounterfactualStratum::new(format!("v{}", i + 1), prevalence, joint).expect("valid joint")
        })
        .collect();
    CounterfactualPopulation::new(strata).expect("prevalences sum to 1")
}

/// Deterministic in `cfg.seed`.
pub fn random_population(cfg: &GeneratorConfig) -> Result<CounterfactualPopulation> {
    cfg.validate()?;
    Ok(draw_population(cfg, &mut cfg.rng(POPULATION_STREAM)))
}

/// Keeps drawing from the seed's stream until `accept` holds.
pub fn random_population_where(
    cfg: &GeneratorConfig,
    accept: impl Fn(&CounterfactualPopulation) -> bool,
) -> Result<CounterfactualPopulation> {
    cfg.validate()?;
    let mut rng = cfg.rng(POPULATION_STREAM);
    for _ in 0..MAX_REJECTIONS {
        let p = draw_population(cfg, &mut rng);
        if accept(&p) {
            return Ok(p);
        }
    }
    Err(Error::InvalidConfig(format!(
        "no accepted population in {MAX_REJECTIONS} draws"
    )))
}

/// Unconfounded: one interior probability per stratum, constant in the
/// potential outcomes. Confounded: within each stratum the probability takes
/// two different interior values depending on `Y^{a=0}`, which breaks
/// `Y^{a=0} ⫫ A | V` on every stratum with `0 < risk0 < 1`.
pub fn random_mechanism(
    cfg: &GeneratorConfig,
    p: &CounterfactualPopulation,
) -> Result<AssignmentMechanism> {
    cfg.validate()?;
    let mut rng = cfg.rng(MECHANISM_STREAM);
    let bound = cfg.denominator_bound;
    let mut m = AssignmentMechanism::empty();
    for label in p.labels() {
        if cfg.confounded {
            let a = draw_interior(&mut rng, bound);
            let b = loop {
                let b = draw_interior(&mut rng, bound);
                if b != a {
                    break b;
                }
            };
            m.set_by_untreated_outcome(label, a, b);
        } else {
            m.set_stratum(label, draw_interior(&mut rng, bound));
        }
    }
    Ok(m)
}

/// Same strata and margins, with every coupling redrawn.
pub fn random_recoupling(p: &CounterfactualPopulation, seed: u64, bound: u64) -> CounterfactualPopulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(COUPLING_STREAM);
    p.map_strata(|s| {
        let (lo, hi) = s.coupling_bounds();
        let d = rng.gen_range(1..=bound.max(1));
        let t = frac(rng.gen_range(0..=d), d);
        s.recoupled(&lo + (hi - &lo) * t)
    })
    .expect("point of the feasible segment")
}

/// Largest denominator appearing in a population's prevalences and risks.
pub fn max_denominator(p: &CounterfactualPopulation) -> BigInt {
    p.strata()
        .iter()
        .flat_map(|s| {
            let r = s.risks();
            [s.prevalence().denom().clone(), r.r0.denom().clone(), r.r1.denom().clone()]
        })
        .max()
        .unwrap_or_else(BigInt::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_conditional_exchangeability;
    use num_traits::Zero;

    fn cfg(seed: u64, n: usize) -> GeneratorConfig {
        GeneratorConfig {
            stratum_count: n,
            denominator_bound: 50,
            confounded: false,
            seed,
        }
    }

    #[test]
    fn same_seed_same_population() {
        let a = random_population(&cfg(7, 4)).unwrap();
        let b = random_population(&cfg(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_population(&cfg(8, 4)).unwrap());
    }

    #[test]
    fn single_stratum_has_full_prevalence() {
        let p = random_population(&cfg(3, 1)).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.strata()[0].prevalence().is_one());
    }

    #[test]
    fn config_is_validated() {
        assert!(random_population(&cfg(0, 0)).is_err());
        let mut c = cfg(0, 2);
        c.denominator_bound = 1;
        assert!(random_population(&c).is_err());
        c.denominator_bound = 2;
        c.confounded = true;
        assert!(random_population(&c).is_err());
    }

    #[test]
    fn risk_denominators_respect_the_bound() {
        for seed in 0..50 {
            let p = random_population(&cfg(seed, 5)).unwrap();
            for s in p.strata() {
                let r = s.risks();
                assert!(*r.r0.denom() <= BigInt::from(50));
                assert!(*r.r1.denom() <= BigInt::from(50));
            }
        }
    }

    #[test]
    fn mechanisms_follow_their_flag() {
        for seed in 0..50 {
            let mut c = cfg(seed, 3);
            let p = random_population(&c).unwrap();
            let m = random_mechanism(&c, &p).unwrap();
            assert!(check_conditional_exchangeability(&p, &m).unwrap().both());
            assert_eq!(m, random_mechanism(&c, &p).unwrap());

            c.confounded = true;
            let m = random_mechanism(&c, &p).unwrap();
            let interior = p
                .strata()
                .iter()
                .any(|s| !s.risks().r0.is_zero() && !s.risks().r0.is_one());
            if interior {
                assert!(!check_conditional_exchangeability(&p, &m).unwrap().a0);
            }
        }
    }

    #[test]
    fn rejection_filter() {
        let p = random_population_where(&cfg(11, 6), |p| {
            p.strata().iter().all(|s| s.risks().r0.value() > &frac(1, 2))
        })
        .unwrap();
        assert!(p.strata().iter().all(|s| s.risks().r0.value() > &frac(1, 2)));
        assert!(random_population_where(&cfg(1, 2), |_| false).is_err());
    }

    #[test]
    fn recoupling_keeps_margins() {
        let p = random_population(&cfg(5, 4)).unwrap();
        let q = random_recoupling(&p, 99, 20);
        for (a, b) in p.strata().iter().zip(q.strata()) {
            assert_eq!(a.risks(), b.risks());
            assert_eq!(a.prevalence(), b.prevalence());
        }
    }
}
