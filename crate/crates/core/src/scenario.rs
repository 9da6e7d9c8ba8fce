//! Built-in scenarios.

use crate::error::{Error, Result};
use crate::model::{
    check_conditional_exchangeability, stratum_effects, AssignmentMechanism,
    CounterfactualPopulation, CounterfactualStratum, EffectMeasureKind,
};
use crate::rational::{ratio, Probability};

pub const SCENARIO_NAMES: [&str; 3] = ["table1", "no-effect-modification", "confounded-demo"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub name: String,
    pub description: String,
    pub population: CounterfactualPopulation,
    pub mechanism: AssignmentMechanism,
}

fn prob(n: i64, d: i64) -> Probability {
    Probability::new(ratio(n, d)).expect("literal probability")
}

fn population(rows: &[(&str, (i64, i64), (i64, i64), (i64, i64))]) -> CounterfactualPopulation {
    let strata = rows
        .iter()
        .map(|(label, p, r0, r1)| {
            CounterfactualStratum::independent(*label, prob(p.0, p.1), prob(r0.0, r0.1), prob(r1.0, r1.1))
        })
        .collect();
    CounterfactualPopulation::new(strata).expect("literal population")
}

pub fn builtin_scenario(name: &str) -> Result<ScenarioSpec> {
    let spec = match name {
        "table1" => ScenarioSpec {
            name: name.into(),
            description: "Randomized trial, 25% men and 75% women; stratum odds ratios are both 3 \
                          while the marginal odds ratio is 99/35"
                .into(),
            population: population(&[
                ("men", (1, 4), (1, 2), (3, 4)),
                ("women", (3, 4), (1, 4), (1, 2)),
            ]),
            mechanism: AssignmentMechanism::constant(prob(1, 2)),
        },
        "no-effect-modification" => {
            let spec = ScenarioSpec {
                name: name.into(),
                description: "Two strata sharing a risk difference of 1/5 under randomization".into(),
                population: population(&[
                    ("s1", (1, 2), (1, 5), (2, 5)),
                    ("s2", (1, 2), (1, 2), (7, 10)),
                ]),
                mechanism: AssignmentMechanism::constant(prob(1, 2)),
            };
            let rds = stratum_effects(EffectMeasureKind::Rd, &spec.population);
            assert!(rds.windows(2).all(|w| w[0].value == w[1].value));
            spec
        }
        "confounded-demo" => {
            let mut mechanism = AssignmentMechanism::empty();
            for label in ["s1", "s2"] {
                mechanism.set_by_untreated_outcome(label, prob(1, 10), prob(9, 10));
            }
            let spec = ScenarioSpec {
                name: name.into(),
                description: "Treatment is given mostly to those who would be cases untreated \
                              (Pr(A=1) = 9/10 if Y^{a=0}=1, else 1/10)"
                    .into(),
                population: population(&[
                    ("s1", (1, 2), (1, 5), (2, 5)),
                    ("s2", (1, 2), (2, 5), (2, 5)),
                ]),
                mechanism,
            };
            let flags = check_conditional_exchangeability(&spec.population, &spec.mechanism)?;
            assert!(!flags.a0, "confounded-demo must violate exchangeability");
            spec
        }
        _ => return Err(Error::UnknownScenario(name.to_string())),
    };
    Ok(spec)
}
