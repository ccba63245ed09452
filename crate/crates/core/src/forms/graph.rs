//! `ℒ₀`, the graphs `𝒢(ℒ₀)` and `ℋ(ℒ₀₁,…,ℒ₀ₖ)`, and conditions (i)/(ii).

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::factor::{factorize, Factorization, LinearForm};
use super::linalg::{independent_subset, rank, relations};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::heights::height;
use crate::interval::Interval;
use crate::nf::AlgNum;

/// Factor `k` equals `mu · L0[class]`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorClass {
    pub class: usize,
    pub mu: AlgNum,
}

/// First-seen representative of each proportionality class.
pub fn build_l0(factors: &[LinearForm]) -> (Vec<LinearForm>, Vec<FactorClass>) {
    let mut l0: Vec<LinearForm> = Vec::new();
    let mut classes = Vec::with_capacity(factors.len());
    for f in factors {
        match l0.iter().enumerate().find_map(|(i, r)| f.ratio_to(r).map(|mu| (i, mu))) {
            Some((class, mu)) => classes.push(FactorClass { class, mu }),
            None => {
                classes.push(FactorClass { class: l0.len(), mu: AlgNum::one() });
                l0.push(f.clone());
            }
        }
    }
    (l0, classes)
}

fn rows(forms: &[&LinearForm]) -> Vec<Vec<AlgNum>> {
    forms.iter().map(|l| l.coeffs().to_vec()).collect()
}

/// Edge `{i, j}` of `𝒢` with every third form in the span of the pair.
#[derive(Clone, Debug, Serialize)]
pub struct GEdge {
    pub i: usize,
    pub j: usize,
    pub thirds: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphG {
    pub edges: Vec<GEdge>,
    /// Components in order of their smallest vertex.
    pub components: Vec<Vec<usize>>,
    pub triangularly_connected: bool,
}

impl GraphG {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.components.iter().position(|c| c.contains(&v)).expect("vertex in a component")
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| if e.i == v { Some(e.j) } else if e.j == v { Some(e.i) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&GEdge> {
        let (i, j) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.i == i && e.j == j)
    }
}

fn components(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in pairs {
        uf.union(a, b);
    }
    let labels = uf.into_labeling();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for v in 0..n {
        match seen.iter().position(|&l| l == labels[v]) {
            Some(c) => comps[c].push(v),
            None => {
                seen.push(labels[v]);
                comps.push(vec![v]);
            }
        }
    }
    comps
}

/// `{ℓ, ℓ'}` is an edge when some third `ℓ''` lies in their span, i.e. the
/// three forms have rank 2.
pub fn build_graph_g(l0: &[LinearForm]) -> GraphG {
    let n = l0.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let thirds: Vec<usize> =
                (0..n).filter(|&k| k != i && k != j && rank(&rows(&[&l0[i], &l0[j], &l0[k]])) == 2).collect();
            if !thirds.is_empty() {
                edges.push(GEdge { i, j, thirds });
            }
        }
    }
    let comps = components(n, edges.iter().map(|e| (e.i, e.j)));
    let triangularly_connected = n >= 3 && comps.len() == 1;
    GraphG { edges, components: comps, triangularly_connected }
}

/// `ℓ_{ij} = Σ a·ℓ (over ℒ₀ᵢ) = Σ b·ℓ (over ℒ₀ⱼ)`.
#[derive(Clone, Debug, Serialize)]
pub struct HEdge {
    pub a: usize,
    pub b: usize,
    pub witness: LinearForm,
    pub combo_a: Vec<(usize, AlgNum)>,
    pub combo_b: Vec<(usize, AlgNum)>,
    /// Total number of nonzero terms in both combinations.
    pub support: usize,
    /// Whether the support is known to be minimal.
    pub minimal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphH {
    pub edges: Vec<HEdge>,
    pub connected: bool,
}

/// Subsets of `items` of size `k`, in lexicographic order.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Subset pairs examined per component pair before falling back to a
/// kernel-basis witness.
const WITNESS_BUDGET: usize = 20_000;

fn witness_from(l0: &[LinearForm], sa: &[usize], sb: &[usize], minimal: bool, a: usize, b: usize) -> Option<HEdge> {
    let all: Vec<&LinearForm> = sa.iter().chain(sb).map(|&i| &l0[i]).collect();
    let rel = relations(&rows(&all));
    for lam in rel {
        let (la, lb) = lam.split_at(sa.len());
        let combo_a: Vec<(usize, AlgNum)> =
            sa.iter().zip(la).filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (i, c.clone())).collect();
        if combo_a.is_empty() {
            continue;
        }
        let combo_b: Vec<(usize, AlgNum)> =
            sb.iter().zip(lb).filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (i, -c)).collect();
        let m = l0[0].m();
        let mut w = vec![AlgNum::zero(); m];
        for (i, c) in &combo_a {
            for (x, y) in w.iter_mut().zip(l0[*i].coeffs()) {
                *x = &*x + &(c * y);
            }
        }
        let Ok(witness) = LinearForm::new(w) else { continue };
        let support = combo_a.len() + combo_b.len();
        return Some(HEdge { a, b, witness, combo_a, combo_b, support, minimal });
    }
    None
}

fn intersection_witness(l0: &[LinearForm], ca: &[usize], cb: &[usize], a: usize, b: usize) -> Option<HEdge> {
    let ra = rank(&rows(&ca.iter().map(|&i| &l0[i]).collect::<Vec<_>>()));
    let rb = rank(&rows(&cb.iter().map(|&i| &l0[i]).collect::<Vec<_>>()));
    let both: Vec<&LinearForm> = ca.iter().chain(cb).map(|&i| &l0[i]).collect();
    if ra + rb == rank(&rows(&both)) {
        return None;
    }
    // Smallest pair of independent subsets whose spans meet: the relation on
    // their union has full support.
    let mut tried = 0usize;
    for total in 2..=ca.len() + cb.len() {
        for p in 1..total {
            let q = total - p;
            if p > ca.len() || q > cb.len() {
                continue;
            }
            for sa in subsets(ca, p) {
                if rank(&rows(&sa.iter().map(|&i| &l0[i]).collect::<Vec<_>>())) != p {
                    continue;
                }
                for sb in subsets(cb, q) {
                    tried += 1;
                    if tried > WITNESS_BUDGET {
                        return basis_witness(l0, ca, cb, a, b);
                    }
                    let us: Vec<&LinearForm> = sa.iter().chain(&sb).map(|&i| &l0[i]).collect();
                    if rank(&rows(&us)) < total && rank(&rows(&us[p..])) == q {
                        return witness_from(l0, &sa, &sb, true, a, b);
                    }
                }
            }
        }
    }
    basis_witness(l0, ca, cb, a, b)
}

/// Witness from independent subsets spanning each side; any relation between
/// them has a nonzero part on both.
fn basis_witness(l0: &[LinearForm], ca: &[usize], cb: &[usize], a: usize, b: usize) -> Option<HEdge> {
    let pick = |c: &[usize]| -> Vec<usize> {
        independent_subset(&rows(&c.iter().map(|&i| &l0[i]).collect::<Vec<_>>())).into_iter().map(|k| c[k]).collect()
    };
    witness_from(l0, &pick(ca), &pick(cb), false, a, b)
}

/// Edges between components whose spans intersect nontrivially.
pub fn build_graph_h(l0: &[LinearForm], comps: &[Vec<usize>]) -> GraphH {
    let k = comps.len();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if let Some(e) = intersection_witness(l0, &comps[a], &comps[b], a, b) {
                edges.push(e);
            }
        }
    }
    let connected = components(k, edges.iter().map(|e| (e.a, e.b))).len() == 1;
    GraphH { edges, connected }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub rank_ok: bool,
    pub connectivity_ok: bool,
    pub k: usize,
    pub applicable: bool,
    pub reasons: Vec<String>,
}

/// Conditions (i) and (ii).
pub fn check_conditions(m: usize, rank_l0: usize, l0_len: usize, g: &GraphG, h: Option<&GraphH>) -> Verdict {
    let k = g.k();
    let rank_ok = rank_l0 == m;
    let connectivity_ok = k == 1 || h.is_some_and(|h| h.connected);
    let mut reasons = Vec::new();
    if !rank_ok {
        reasons.push(format!("L0 has rank {rank_l0}, fewer than the {m} variables"));
    }
    if !connectivity_ok {
        reasons.push(format!("G(L0) has {k} components and the graph H on them is not connected"));
    }
    let tiny = k == 1 && l0_len < 3;
    if tiny {
        reasons.push(format!("L0 has {l0_len} form(s), so G(L0) has no edges and yields no unit equations"));
    }
    Verdict { rank_ok, connectivity_ok, k, applicable: rank_ok && connectivity_ok && !tiny, reasons }
}

/// A decomposable form with its factorization and connectivity data.
#[derive(Clone, Debug, Serialize)]
pub struct FormSystem {
    pub m: usize,
    pub n: usize,
    pub radicand: i64,
    pub form: String,
    pub scalar: AlgNum,
    pub factors: Vec<LinearForm>,
    pub l0: Vec<LinearForm>,
    pub classes: Vec<FactorClass>,
    pub rank: usize,
    /// Largest height of a coefficient of a form in `ℒ₀`.
    #[serde(serialize_with = "crate::forms::ser_interval")]
    pub h_f: Interval,
    pub graph_g: GraphG,
    pub graph_h: Option<GraphH>,
    pub verdict: Verdict,
    /// The witnesses `ℓ_{ij}` when `k > 1` and `ℋ` is connected.
    pub witnesses: Vec<LinearForm>,
    #[serde(skip)]
    pub poly: Poly,
}

impl FormSystem {
    pub fn from_factorization(poly: &Poly, radicand: i64, fac: Factorization, prec: u32) -> Result<Self> {
        let m = poly.nvars();
        let (l0, classes) = build_l0(&fac.factors);
        let rank_l0 = rank(&rows(&l0.iter().collect::<Vec<_>>()));
        let mut h_f = Interval::zero(prec);
        for c in l0.iter().flat_map(|l| l.coeffs()).filter(|c| !c.is_zero()) {
            h_f = h_f.max(&height(c, prec)?.value);
        }
        let graph_g = build_graph_g(&l0);
        let graph_h = (graph_g.k() > 1).then(|| build_graph_h(&l0, &graph_g.components));
        let verdict = check_conditions(m, rank_l0, l0.len(), &graph_g, graph_h.as_ref());
        let witnesses = match &graph_h {
            Some(h) if h.connected && verdict.rank_ok => h.edges.iter().map(|e| e.witness.clone()).collect(),
            _ => Vec::new(),
        };
        Ok(FormSystem {
            m,
            n: fac.factors.len(),
            radicand,
            form: poly.to_string(),
            scalar: fac.scalar,
            factors: fac.factors,
            l0,
            classes,
            rank: rank_l0,
            h_f,
            graph_g,
            graph_h,
            verdict,
            witnesses,
            poly: poly.clone(),
        })
    }

    /// Factor (or verify supplied factors of) `poly` and build the system.
    pub fn build(poly: &Poly, radicand: i64, supplied: Option<Vec<LinearForm>>, prec: u32) -> Result<Self> {
        let fac = factorize(poly, radicand, supplied)?;
        Self::from_factorization(poly, radicand, fac, prec)
    }

    pub fn require_applicable(&self) -> Result<()> {
        if self.verdict.applicable {
            Ok(())
        } else {
            Err(Error::NotApplicable(self.verdict.reasons.join("; ")))
        }
    }

    /// `ℓ₁(x)⋯ℓ_n(x)` times the scalar, i.e. `F(x)`.
    pub fn eval(&self, x: &[AlgNum]) -> AlgNum {
        self.factors.iter().fold(self.scalar.clone(), |acc, l| &acc * &l.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse::parse_poly;

    fn sys(text: &str, m: usize, d: i64) -> FormSystem {
        FormSystem::build(&parse_poly(text, m, Some(d)).unwrap(), d, None, 128).unwrap()
    }

    fn lf(xs: &[i64]) -> LinearForm {
        LinearForm::new(xs.iter().map(|&x| AlgNum::from_int(x)).collect()).unwrap()
    }

    #[test]
    fn triangles() {
        let s = sys("X1*X2*(X1+X2)", 2, 0);
        assert_eq!(s.graph_g.edges.len(), 3);
        assert!(s.graph_g.triangularly_connected);
        assert!(s.verdict.applicable);
        let s = sys("X1*X2*(X1+X2)*(X1-X2)", 2, 0);
        assert_eq!(s.l0.len(), 4);
        assert!(s.graph_g.triangularly_connected);
        let s = sys("X1^2*X2*(2*X1+2*X2)", 2, 0);
        assert_eq!(s.l0.len(), 3);
        assert_eq!(s.n, 4);
    }

    #[test]
    fn norm_form_fails() {
        let s = sys("X1^2 - 2*X2^2", 2, 2);
        assert_eq!(s.verdict.k, 2);
        assert!(!s.verdict.applicable);
        let s = sys("X1*X2", 2, 0);
        assert!(s.verdict.rank_ok && !s.verdict.connectivity_ok);
    }

    #[test]
    fn l0_collapse() {
        let (l0, cl) = build_l0(&[lf(&[1, 0]), lf(&[2, 0]), lf(&[0, 1])]);
        assert_eq!(l0.len(), 2);
        assert_eq!(cl[1].mu, AlgNum::from_int(2));
    }

    #[test]
    fn h_witnesses() {
        let l0 = vec![lf(&[1, 0, 0]), lf(&[0, 1, 0]), lf(&[1, 1, 0]), lf(&[0, 1, 1]), lf(&[0, 2, 1]), lf(&[0, 0, 1])];
        let g = build_graph_g(&l0);
        // X2 lies on both triangles
        assert_eq!(g.k(), 1);
        let l0 = vec![lf(&[1, 0, 0]), lf(&[1, 1, 0]), lf(&[1, 2, 0]), lf(&[0, 1, 1]), lf(&[0, 1, 2]), lf(&[0, 1, 3])];
        // spans ⟨X1,X2⟩ and ⟨X2,X3⟩ meet in the line of X2
        let g = build_graph_g(&l0);
        assert_eq!(g.k(), 2);
        let h = build_graph_h(&l0, &g.components);
        assert!(h.connected);
        let w = &h.edges[0].witness;
        assert!(w.ratio_to(&lf(&[0, 1, 0])).is_some(), "{w}");
        assert_eq!(h.edges[0].support, 4);
        assert!(h.edges[0].minimal);
        let s = FormSystem::build(
            &parse_poly("X1*X2*(X1+X2)*X3", 3, Some(0)).unwrap(),
            0,
            Some(vec![lf(&[1, 0, 0]), lf(&[0, 1, 0]), lf(&[1, 1, 0]), lf(&[0, 0, 1])]),
            128,
        )
        .unwrap();
        assert_eq!(s.verdict.k, 2);
        assert!(!s.verdict.connectivity_ok);
    }
}
