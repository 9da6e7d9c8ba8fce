//! Exact effect measures and collapsibility weights for stratified
//! binary-exposure, binary-outcome populations.
//!
//! - [`model`]: counterfactual populations, observational tables, effect
//!   measures and exchangeability checks.
//! - [`collapse`]: causal and associational weight schemes, exact
//!   collapsibility reports and the weight-existence decision.
//! - [`identify`]: weights and standardized measures computed from observed
//!   data.
//! - [`scenario`], [`generate`], [`io`]: built-in scenarios, seeded random
//!   populations and the JSON/CSV formats.

pub mod collapse;
pub mod error;
pub mod generate;
pub mod identify;
pub mod io;
pub mod model;
pub mod rational;
pub mod scenario;

pub use collapse::{
    causal_weights, check_associational_collapsibility, check_causal_collapsibility,
    def_equivalence_check, newman_weights, prevalence_weights, weight_feasibility,
    weighted_average, CollapsibilityReport, Definition, EquivalenceReport, FeasibilityResult,
    NewmanWeights, Verdict, WeightVector,
};
pub use error::{Error, Result};
pub use generate::{random_mechanism, random_population, GeneratorConfig};
pub use identify::{
    identify_rr_minus_weights, miettinen_srr, miettinen_weights, standardized_effect,
    unexposed_target_weights, TargetStratum,
};
pub use model::{
    apply_assignment, check_conditional_exchangeability, check_marginal_exchangeability,
    effect_value, marginal_effect, marginal_risks, stratum_effects, stratum_risks,
    validate_population, AssignmentMechanism, CounterfactualPopulation, CounterfactualStratum,
    EffectMeasureKind, Exchangeability, Joint, ObservationalTable, ObservedStratum, RawStratum,
    RiskPair, StratumEffect, StratumValue,
};
pub use rational::{Probability, Rational};
pub use scenario::{builtin_scenario, ScenarioSpec};
