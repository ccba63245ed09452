//! Reduction of `F(x) = δ` to three-term unit equations.

use std::collections::VecDeque;

use serde::Serialize;

use super::factor::LinearForm;
use super::graph::{FormSystem, HEdge};
use super::linalg::relations;
use crate::error::{Error, Result};
use crate::heights::{height, is_s_integral, s_norm, SSpec};
use crate::interval::Interval;
use crate::nf::AlgNum;

/// An element of `ℒ₀` rescaled to integral coefficients: `form = scale·ℒ₀[i]`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizedForm {
    pub form: LinearForm,
    pub scale: AlgNum,
    pub multiplicity: usize,
}

/// `λᵢℓᵢ + λⱼℓⱼ + λₖℓₖ = 0` with `λₖ = −1`, giving
/// `τᵢεᵢ + τⱼεⱼ + τₖεₖ = 0` on the values `δ = ℓ(x) = ε·ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitEquation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub lambda: [AlgNum; 3],
    /// `h(λᵢ)`, `h(λⱼ)`, `h(λₖ)`.
    #[serde(serialize_with = "ser_intervals")]
    pub tau_heights: Vec<Interval>,
    /// `max(h(λᵢ/λₖ), h(λⱼ/λₖ))`, the coefficient part of `H` for the edge.
    #[serde(serialize_with = "crate::forms::ser_interval")]
    pub coeff_height: Interval,
}

fn ser_intervals<S: serde::Serializer>(xs: &[Interval], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&crate::bounds::TaggedInterval::from(x))?;
    }
    seq.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct BfsNode {
    pub vertex: usize,
    pub parent: Option<usize>,
    pub dist: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitEquationSystem {
    pub forms: Vec<NormalizedForm>,
    pub delta: AlgNum,
    /// Right-hand side once every factor is integral: `∏ formᵣ(x)^{mᵣ} = δ'`.
    pub delta_prime: AlgNum,
    #[serde(serialize_with = "crate::forms::ser_interval")]
    pub h_delta_prime: Interval,
    #[serde(serialize_with = "crate::forms::ser_interval")]
    pub log_ns_delta_prime: Interval,
    pub equations: Vec<UnitEquation>,
    /// Relations across components of `𝒢` (`k > 1` only).
    pub cross_relations: Vec<HEdge>,
    pub base: usize,
    /// BFS tree over `𝒢` from `base`, in visiting order.
    pub bfs: Vec<BfsNode>,
}

fn h0(x: &AlgNum, prec: u32) -> Result<Interval> {
    if x.is_zero() {
        Ok(Interval::zero(prec))
    } else {
        Ok(height(x, prec)?.value)
    }
}

/// Normalize the factors, rewrite `δ`, and solve for the edge coefficients.
pub fn reduce_to_unit_equations(sys: &FormSystem, delta: &AlgNum, s: &SSpec, prec: u32) -> Result<UnitEquationSystem> {
    let field = s.field();
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    sys.require_applicable()?;
    for c in sys.l0.iter().flat_map(|l| l.coeffs()).chain([&sys.scalar]) {
        field.require_element(c)?;
    }
    field.require_element(delta)?;
    if delta.is_zero() {
        return Err(Error::Domain("δ must be nonzero".into()));
    }
    if !is_s_integral(delta, s)? {
        return Err(Error::NotSIntegral);
    }
    let mut forms: Vec<NormalizedForm> = sys
        .l0
        .iter()
        .map(|l| {
            let (scale, form) = l.integral();
            NormalizedForm { form, scale, multiplicity: 0 }
        })
        .collect();
    // F = c·∏ μₖ·L0[rₖ] = c·∏ μₖ·formᵣₖ / scaleᵣₖ
    let mut den = sys.scalar.clone();
    let mut num = delta.clone();
    for cl in &sys.classes {
        forms[cl.class].multiplicity += 1;
        den = &den * &cl.mu;
        num = &num * &forms[cl.class].scale;
    }
    let delta_prime = &num / &den;
    let h_delta_prime = h0(&delta_prime, prec)?;
    let log_ns_delta_prime = Interval::ln_ratio(prec, &s_norm(&delta_prime, s)?);

    let mut equations = Vec::with_capacity(sys.graph_g.edges.len());
    for e in &sys.graph_g.edges {
        let k = e.thirds[0];
        let rel = relations(&[forms[e.i].form.coeffs().to_vec(), forms[e.j].form.coeffs().to_vec(), forms[k].form.coeffs().to_vec()]);
        let r = rel.first().ok_or_else(|| Error::VerificationFailed("edge without a relation".into()))?;
        let norm = -&r[2];
        let lambda = [&r[0] / &norm, &r[1] / &norm, AlgNum::from_int(-1)];
        let tau_heights = lambda.iter().map(|x| h0(x, prec)).collect::<Result<Vec<_>>>()?;
        // λₖ = −1, so h(λᵢ/λₖ) = h(λᵢ)
        let coeff_height = tau_heights[0].max(&tau_heights[1]);
        equations.push(UnitEquation { i: e.i, j: e.j, k, lambda, tau_heights, coeff_height });
    }

    let base = 0;
    let mut bfs = vec![BfsNode { vertex: base, parent: None, dist: 0 }];
    let mut seen = vec![false; forms.len()];
    seen[base] = true;
    let mut queue = VecDeque::from([(base, 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        for w in sys.graph_g.neighbours(v) {
            if !seen[w] {
                seen[w] = true;
                bfs.push(BfsNode { vertex: w, parent: Some(v), dist: d + 1 });
                queue.push_back((w, d + 1));
            }
        }
    }

    let cross_relations = sys.graph_h.as_ref().map(|h| h.edges.clone()).unwrap_or_default();
    Ok(UnitEquationSystem {
        forms,
        delta: delta.clone(),
        delta_prime,
        h_delta_prime,
        log_ns_delta_prime,
        equations,
        cross_relations,
        base,
        bfs,
    })
}

impl UnitEquationSystem {
    /// Total degree `n = Σ mᵣ`.
    pub fn degree(&self) -> usize {
        self.forms.iter().map(|f| f.multiplicity).sum()
    }

    pub fn equation(&self, a: usize, b: usize) -> Option<&UnitEquation> {
        let (i, j) = (a.min(b), a.max(b));
        self.equations.iter().find(|e| e.i == i && e.j == j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse::parse_poly;
    use crate::nf::build_rational_field;

    fn ues(text: &str, delta: i64) -> UnitEquationSystem {
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2, 3]).unwrap();
        let sys = FormSystem::build(&parse_poly(text, 2, Some(0)).unwrap(), 0, None, 128).unwrap();
        reduce_to_unit_equations(&sys, &AlgNum::from_int(delta), &s, 128).unwrap()
    }

    #[test]
    fn lambda_solves() {
        let u = ues("X1*X2*(X1+X2)", 1);
        assert_eq!(u.equations.len(), 3);
        let e = u.equation(0, 1).unwrap();
        assert_eq!(e.lambda, [AlgNum::one(), AlgNum::one(), AlgNum::from_int(-1)]);
        assert!(e.coeff_height.is_point());
        let u = ues("X1*X2*(X1+2*X2)", 1);
        let e = u.equation(0, 1).unwrap();
        assert_eq!(e.lambda[1], AlgNum::from_int(2));
        assert!((e.coeff_height.mid_f64() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(u.bfs.len(), 3);
    }

    #[test]
    fn delta_rewrites() {
        let u = ues("X1*X2*(X1/2+X2/3)", 6);
        // integral form 3X1 + 2X2 = 6·(X1/2 + X2/3): δ' = 6·6
        assert_eq!(u.delta_prime, AlgNum::from_int(36));
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2]).unwrap();
        let sys = FormSystem::build(&parse_poly("X1*X2*(X1+X2)", 2, Some(0)).unwrap(), 0, None, 128).unwrap();
        assert_eq!(reduce_to_unit_equations(&sys, &AlgNum::frac(1, 3), &s, 128).unwrap_err(), Error::NotSIntegral);
        let sys = FormSystem::build(&parse_poly("X1*X2", 2, Some(0)).unwrap(), 0, None, 128).unwrap();
        assert!(matches!(reduce_to_unit_equations(&sys, &AlgNum::one(), &s, 128), Err(Error::NotApplicable(_))));
    }
}
