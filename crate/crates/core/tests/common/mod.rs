#![allow(dead_code)]

use collapsekit_core::rational::ratio;
use collapsekit_core::{
    AssignmentMechanism, CounterfactualPopulation, CounterfactualStratum, Probability, Rational,
};
use num_traits::Zero;
use proptest::prelude::*;

pub fn prob(n: i64, d: i64) -> Probability {
    Probability::new(ratio(n, d)).unwrap()
}

/// One cell of the full joint law of `(V, Y^{a=0}, Y^{a=1}, A)`.
#[derive(Debug, Clone)]
pub struct Atom {
    pub stratum: usize,
    pub y0: usize,
    pub y1: usize,
    pub a: usize,
    pub mass: Rational,
}

/// Enumerates the joint law cell by cell. Everything the oracle reports is a
/// ratio of sums over this list; nothing goes through the library's
/// risk or table code.
pub fn enumerate(p: &CounterfactualPopulation, m: &AssignmentMechanism) -> Vec<Atom> {
    let mut atoms = Vec::new();
    for (i, s) in p.strata().iter().enumerate() {
        for y0 in 0..2 {
            for y1 in 0..2 {
                let pi = m.pi(s.label(), y0, y1).unwrap().value().clone();
                let base = s.prevalence().value() * s.joint().get(y0, y1).value();
                atoms.push(Atom { stratum: i, y0, y1, a: 1, mass: &base * &pi });
                atoms.push(Atom { stratum: i, y0, y1, a: 0, mass: base * (Rational::from_integer(1.into()) - pi) });
            }
        }
    }
    atoms
}

pub fn mass(atoms: &[Atom], keep: impl Fn(&Atom) -> bool) -> Rational {
    atoms.iter().filter(|a| keep(a)).map(|a| a.mass.clone()).sum()
}

/// `Pr(event | given)`, `None` when the conditioning event is null.
pub fn conditional(
    atoms: &[Atom],
    event: impl Fn(&Atom) -> bool,
    given: impl Fn(&Atom) -> bool,
) -> Option<Rational> {
    let denom = mass(atoms, &given);
    if denom.is_zero() {
        return None;
    }
    Some(mass(atoms, |a| given(a) && event(a)) / denom)
}

/// Observed outcome under consistency.
pub fn observed_y(a: &Atom) -> usize {
    if a.a == 1 {
        a.y1
    } else {
        a.y0
    }
}

/// Associational risk difference within stratum `v` (or marginal if `None`).
pub fn associational_rd(atoms: &[Atom], v: Option<usize>) -> Option<Rational> {
    let in_v = |x: &Atom| v.map_or(true, |v| x.stratum == v);
    let r1 = conditional(atoms, |x| observed_y(x) == 1, |x| in_v(x) && x.a == 1)?;
    let r0 = conditional(atoms, |x| observed_y(x) == 1, |x| in_v(x) && x.a == 0)?;
    Some(r1 - r0)
}

pub fn causal_rd(atoms: &[Atom], v: Option<usize>) -> Option<Rational> {
    let in_v = |x: &Atom| v.map_or(true, |v| x.stratum == v);
    let r1 = conditional(atoms, |x| x.y1 == 1, in_v)?;
    let r0 = conditional(atoms, |x| x.y0 == 1, in_v)?;
    Some(r1 - r0)
}

/// `Pr(A=1 | Y^a=1) == Pr(A=1 | Y^a=0)`, optionally within stratum `v`.
pub fn exchangeable(atoms: &[Atom], under_exposure: bool, v: Option<usize>) -> bool {
    let y = |x: &Atom| if under_exposure { x.y1 } else { x.y0 };
    let in_v = |x: &Atom| v.map_or(true, |v| x.stratum == v);
    let p1 = conditional(atoms, |x| x.a == 1, |x| in_v(x) && y(x) == 1);
    let p0 = conditional(atoms, |x| x.a == 1, |x| in_v(x) && y(x) == 0);
    match (p1, p0) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

/// `(size, denominator, risk0 numerator, risk1 numerator, coupling position)`
/// draws, turned into a population with bounded denominators.
pub fn population_strategy(max_strata: usize, bound: i64) -> impl Strategy<Value = CounterfactualPopulation> {
    prop::collection::vec((1..=bound, 2..=bound, 0.0..=1.0f64, 0.0..=1.0f64, 0..=bound), 1..=max_strata)
        .prop_map(move |rows| {
            let total: i64 = rows.iter().map(|r| r.0).sum();
            let strata = rows
                .iter()
                .enumerate()
                .map(|(i, &(size, d, u0, u1, c))| {
                    let k0 = (u0 * d as f64).round() as i64;
                    let k1 = (u1 * d as f64).round() as i64;
                    let s = CounterfactualStratum::independent(format!("v{i}"), prob(size, total), prob(k0, d), prob(k1, d));
                    let (lo, hi) = s.coupling_bounds();
                    let both = &lo + (hi - &lo) * ratio(c, bound);
                    s.recoupled(both).unwrap()
                })
                .collect();
            CounterfactualPopulation::new(strata).unwrap()
        })
}

/// A constant-per-stratum interior mechanism for the given population.
pub fn unconfounded_for(p: &CounterfactualPopulation, picks: &[i64], d: i64) -> AssignmentMechanism {
    let mut m = AssignmentMechanism::empty();
    for (label, k) in p.labels().zip(picks.iter().cycle()) {
        m.set_stratum(label, prob(1 + k.rem_euclid(d - 1), d));
    }
    m
}
