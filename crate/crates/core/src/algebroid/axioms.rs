use std::sync::Arc;

use serde::Serialize;

use super::gamma::{EtaCache, GammaElement};
use super::spec::AlgebroidSpec;
use super::tensor::{psi, TensorElement};
use crate::error::{Error, Result};
use crate::gradedpoly::{graded_piece_basis, Polynomial};

/// Counts of what `check_axioms` looked at.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub spec: String,
    pub t_max: u32,
    pub monomials_checked: usize,
    pub r_powers_checked: usize,
    pub ideal_generators_checked: usize,
}

fn violation(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::AxiomViolation(format!("{what}: {detail}"))
}

/// Verify the Hopf algebroid identities on every monomial of degree `<= t_max`.
///
/// Per monomial `m`: degree preservation and `epsilon(eta_R(m)) = m`; the groupoid law
/// `Psi(eta_R(m)) = 1 (x) eta_R(m)` (normal form via the moving rule); multiplicativity
/// of the memoised right unit against a direct substitution. Per `r^e`: counit laws and
/// coassociativity. For the integral presentation, invariance of every ideal `I_k`.
pub fn check_axioms(spec: &Arc<AlgebroidSpec>, t_max: u32) -> Result<AxiomReport> {
    let mut report = AxiomReport { spec: spec.label(), t_max, ..Default::default() };
    let mut eta = EtaCache::new(spec);
    let base = spec.base();
    let gens: Vec<GammaElement> = (0..spec.ngens()).map(|i| super::gamma::eta_r_generator(spec, i)).collect();
    let one = GammaElement::one(spec);

    for g in &gens {
        let t = psi(g);
        let rhs = TensorElement::from_factors(&[one.clone(), g.clone()], &mut eta)?;
        if t != rhs {
            return Err(violation("Psi(eta_R(a)) != 1 (x) eta_R(a)", g));
        }
    }

    let step = spec.r_degree();
    let mut t = 0;
    while t <= t_max {
        for m in graded_piece_basis(base, t) {
            let x = Polynomial::monomial(base, m.clone(), 1.into())?;
            let e = eta.eta_monomial(&m);
            if e.homogeneous_degree() != Some(t) && !e.is_zero() {
                return Err(violation("eta_R does not preserve degree", &x));
            }
            if e.epsilon() != x {
                return Err(violation("epsilon(eta_R(x)) != x", &x));
            }
            // eta_R as a ring map: product of generator images, no memo
            let mut direct = one.clone();
            for (i, &k) in m.exps().iter().enumerate() {
                for _ in 0..k {
                    direct = direct.mul(&gens[i])?;
                }
            }
            if direct != e {
                return Err(violation("eta_R is not multiplicative", &x));
            }
            if t <= 2 * step * 5 {
                let lhs = psi(&e);
                let rhs = TensorElement::from_factors(&[one.clone(), e.clone()], &mut eta)?;
                if lhs != rhs {
                    return Err(violation("Psi(eta_R(x)) != 1 (x) eta_R(x)", &x));
                }
            }
            report.monomials_checked += 1;
        }
        let e = t / step;
        if t % step == 0 && spec.max_r_exponent().is_none_or(|m| e <= m) {
            let r = GammaElement::r_power(spec, e);
            let p = psi(&r);
            let r1 = {
                let mut x = TensorElement::zero(spec, 1);
                x.add_term(vec![e], &Polynomial::one(base));
                x
            };
            if p.epsilon_at(0) != r1 || p.epsilon_at(1) != r1 {
                return Err(violation("counit law fails", &r));
            }
            if p.psi_at(0) != p.psi_at(1) {
                return Err(violation("Psi is not coassociative", &r));
            }
            report.r_powers_checked += 1;
        }
        t += step;
    }

    if spec.ideal().is_none() {
        // each I_k is invariant: eta_R(a_i) - a_i has coefficients in I_k for i <= k
        for k in 0..spec.ngens().min(spec.prime() as usize - 1) + 1 {
            for (i, g) in gens.iter().enumerate().take(k) {
                for (e, q) in g.terms() {
                    if e == 0 {
                        continue;
                    }
                    for (m, c) in q.terms() {
                        let in_ideal = m.exps()[..k].iter().any(|&x| x > 0) || c.valuation().is_some_and(|v| v >= 1);
                        if !in_ideal {
                            return Err(violation(&format!("I_{k} is not invariant"), format!("a{}", i + 1)));
                        }
                    }
                }
                report.ideal_generators_checked += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations_satisfy_the_axioms() {
        for spec in [AlgebroidSpec::full(), AlgebroidSpec::reduced()] {
            let r = check_axioms(&spec, 40).unwrap();
            assert!(r.monomials_checked > 10);
        }
        for k in 0..5 {
            check_axioms(&AlgebroidSpec::reduced().quotient(k).unwrap(), 40).unwrap();
        }
    }

    #[test]
    fn corrupted_structure_constant_is_caught() {
        let bad = AlgebroidSpec::full().with_eta_constant(3, 2, 2);
        assert!(matches!(check_axioms(&bad, 40), Err(Error::AxiomViolation(_))));
    }
}
