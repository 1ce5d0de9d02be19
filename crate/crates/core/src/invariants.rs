//! Integrals, cointegrals, the modular function, the distinguished grouplike
//! element, and the Radford and pivotal checks built on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{HopfAlgebra, EXHAUSTIVE_LIMIT};
use crate::linalg::{EchelonBuilder, LinearMap, SparseVec};
use crate::module::{character_witness, ModuleRep};
use crate::scalar::Scalar;

/// Λ, λ, α, ᾱ = α∘S, g_H, ḡ_H = g_H^-1 with the unimodularity flags.
#[derive(Clone, Debug)]
pub struct InvariantBundle {
    /// Left integral, leading coordinate 1.
    pub integral: SparseVec,
    /// Right cointegral as a covector, scaled so that ⟨λ, Λ⟩ = 1.
    pub cointegral: SparseVec,
    pub alpha: Vec<Scalar>,
    pub alpha_bar: Vec<Scalar>,
    pub g: SparseVec,
    pub g_bar: SparseVec,
    pub unimodular: bool,
    pub dual_unimodular: bool,
}

fn bundle_cache() -> &'static Mutex<HashMap<[u8; 32], Arc<InvariantBundle>>> {
    static C: OnceLock<Mutex<HashMap<[u8; 32], Arc<InvariantBundle>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Basis elements whose action determines a module structure: generators when
/// a presentation is in use, all basis elements otherwise.
fn testing_set(h: &HopfAlgebra) -> Vec<usize> {
    match h.presentation() {
        Some(p) if h.dim() > EXHAUSTIVE_LIMIT => p.generators.clone(),
        _ => (0..h.dim()).collect(),
    }
}

/// Basis of {Λ : hΛ = ε(h)Λ for all h}.
pub fn integral_space(h: &HopfAlgebra) -> Vec<SparseVec> {
    let n = h.dim();
    let mut b = EchelonBuilder::new(h.field(), n);
    for i in testing_set(h) {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for j in 0..n {
            for (k, c) in h.mul_basis(i, j).iter() {
                rows[k].push((j, c.clone()));
            }
            if !h.counit()[i].is_zero() {
                rows[j].push((j, -&h.counit()[i]));
            }
        }
        for r in rows {
            b.push(SparseVec::from_entries(r));
        }
    }
    b.kernel()
}

/// The left integral, unique up to scale; its first nonzero coordinate is 1.
pub fn left_integral(h: &HopfAlgebra) -> Result<SparseVec> {
    let k = integral_space(h);
    if k.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "left integral space has dimension {} (expected 1)",
            k.len()
        )));
    }
    Ok(k.into_iter().next().expect("one vector"))
}

/// Basis of {λ : ⟨λ, h_1⟩ h_2 = ⟨λ, h⟩ 1 for all h}, as covectors.
pub fn cointegral_space(h: &HopfAlgebra) -> Vec<SparseVec> {
    let n = h.dim();
    let unit = h.unit();
    let per_h: Vec<Vec<SparseVec>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rows: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
            for (jk, c) in h.comul_basis(i).iter() {
                rows.entry(jk % n).or_default().push((jk / n, c.clone()));
            }
            for (k, u) in unit.iter() {
                rows.entry(k).or_default().push((i, -u));
            }
            let mut keys: Vec<usize> = rows.keys().copied().collect();
            keys.sort_unstable();
            keys.into_iter()
                .map(|k| SparseVec::from_entries(rows.remove(&k).expect("key")))
                .collect()
        })
        .collect();
    let mut b = EchelonBuilder::new(h.field(), n);
    for rows in per_h {
        for r in rows {
            b.push(r);
        }
    }
    b.kernel()
}

pub fn right_cointegral(h: &HopfAlgebra) -> Result<SparseVec> {
    let k = cointegral_space(h);
    if k.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "right cointegral space has dimension {} (expected 1)",
            k.len()
        )));
    }
    Ok(k.into_iter().next().expect("one vector"))
}

/// Rescales λ so that ⟨λ, Λ⟩ = 1.
pub fn normalize_pair(h: &HopfAlgebra, integral: &SparseVec, cointegral: &SparseVec) -> Result<(SparseVec, SparseVec)> {
    let p = cointegral.dot(integral, h.field());
    if p.is_zero() {
        return Err(Error::Inconsistent("⟨λ, Λ⟩ = 0".into()));
    }
    Ok((integral.clone(), cointegral.scale(&p.inv()?)))
}

/// α with Λ e_i = α(e_i) Λ, read off the first nonzero coordinate of Λ and
/// cross-checked on all other coordinates.
pub fn modular_function(h: &HopfAlgebra, integral: &SparseVec) -> Result<Vec<Scalar>> {
    let f = h.field();
    let n = h.dim();
    let (p, lead) = integral
        .first()
        .ok_or_else(|| Error::Inconsistent("zero integral".into()))?;
    let lead_inv = lead.inv()?;
    let value = |i: usize| -> Result<Scalar> {
        let li = h.mul(integral, &h.basis(i));
        let a = &li.coeff(p, f) * &lead_inv;
        if li != integral.scale(&a) {
            return Err(Error::Inconsistent(format!(
                "Λ·{} is not a multiple of Λ",
                h.label(i)
            )));
        }
        Ok(a)
    };
    let alpha: Vec<Scalar> = match h.presentation() {
        Some(pr) if n > EXHAUSTIVE_LIMIT => {
            let gens: Vec<Scalar> = pr
                .generators
                .iter()
                .map(|&g| value(g))
                .collect::<Result<_>>()?;
            let mut out: Vec<Option<Scalar>> = vec![None; n];
            for i in 0..n {
                fill_multiplicative(h, &gens, i, &mut out);
            }
            out.into_iter().map(|v| v.expect("filled")).collect()
        }
        _ => (0..n).into_par_iter().map(value).collect::<Result<_>>()?,
    };
    if let Some(w) = character_witness(h, &alpha) {
        return Err(Error::Inconsistent(format!("α is not an algebra map: {w}")));
    }
    Ok(alpha)
}

fn fill_multiplicative(h: &HopfAlgebra, gens: &[Scalar], i: usize, out: &mut Vec<Option<Scalar>>) -> Scalar {
    if let Some(v) = &out[i] {
        return v.clone();
    }
    let p = h.presentation().expect("presentation");
    let v = match &p.witness[i] {
        None => h.field().one(),
        Some(w) => &(&w.coeff * &gens[w.gen]) * &fill_multiplicative(h, gens, w.rest, out),
    };
    out[i] = Some(v.clone());
    v
}

/// (id ⊗ λ)Δ(x) = x_1 ⟨λ, x_2⟩
fn right_contract(h: &HopfAlgebra, x: usize, lambda: &SparseVec) -> SparseVec {
    let n = h.dim();
    SparseVec::from_entries(
        h.comul_basis(x)
            .iter()
            .filter_map(|(ab, c)| lambda.get(ab % n).map(|l| (ab / n, c * l)))
            .collect(),
    )
}

/// g_H from h_1 ⟨λ, h_2⟩ = ⟨λ, h⟩ g_H, checked against every basis element.
pub fn distinguished_grouplike(h: &HopfAlgebra, cointegral: &SparseVec) -> Result<SparseVec> {
    let (i0, l0) = cointegral
        .first()
        .ok_or_else(|| Error::Inconsistent("zero cointegral".into()))?;
    let g = right_contract(h, i0, cointegral).scale(&l0.inv()?);
    let bad = (0..h.dim()).into_par_iter().find_map_first(|i| {
        let lhs = right_contract(h, i, cointegral);
        let expected = match cointegral.get(i) {
            Some(l) => g.scale(l),
            None => SparseVec::new(),
        };
        (lhs != expected).then(|| h.label(i).to_string())
    });
    if let Some(w) = bad {
        return Err(Error::Inconsistent(format!(
            "h_1 λ(h_2) != λ(h) g_H at h = {w}"
        )));
    }
    if !h.check_grouplike(&g) {
        return Err(Error::Inconsistent("g_H is not grouplike".into()));
    }
    Ok(g)
}

/// (a ⋆ b)(x) = a(x_1) b(x_2)
pub fn convolution(h: &HopfAlgebra, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = h.dim();
    let f = h.field();
    (0..n)
        .map(|i| {
            let mut acc = f.zero();
            for (jk, c) in h.comul_basis(i).iter() {
                let (x, y) = (&a[jk / n], &b[jk % n]);
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(&(c * x) * y);
                }
            }
            acc
        })
        .collect()
}

/// φ ∘ S as a covector.
pub fn compose_antipode(h: &HopfAlgebra, phi: &[Scalar]) -> Vec<Scalar> {
    (0..h.dim())
        .map(|i| h.antipode_basis(i).dot_dense(phi, h.field()))
        .collect()
}

/// Computes (and memoizes) the full invariant bundle.
pub fn invariants(h: &HopfAlgebra) -> Result<Arc<InvariantBundle>> {
    let key = h.fingerprint();
    if let Some(b) = bundle_cache().lock().expect("cache").get(&key) {
        return Ok(b.clone());
    }
    let integral = left_integral(h)?;
    let cointegral = right_cointegral(h)?;
    let (integral, cointegral) = normalize_pair(h, &integral, &cointegral)?;
    let alpha = modular_function(h, &integral)?;
    let alpha_bar = compose_antipode(h, &alpha);
    let g = distinguished_grouplike(h, &cointegral)?;
    let g_bar = h.antipode(&g);
    if h.mul(&g, &g_bar) != *h.unit() {
        return Err(Error::Inconsistent("g_H S(g_H) != 1".into()));
    }
    let unimodular = alpha.as_slice() == h.counit();
    let dual_unimodular = &g == h.unit();
    let b = Arc::new(InvariantBundle {
        integral,
        cointegral,
        alpha,
        alpha_bar,
        g,
        g_bar,
        unimodular,
        dual_unimodular,
    });
    bundle_cache().lock().expect("cache").insert(key, b.clone());
    Ok(b)
}

/// Checks x ↦ g_H·x is an H-module map k_ᾱ ⊗ X → X_{S⁴} ⊗ k_ᾱ for the
/// regular module X.
pub fn verify_radford(h: &Arc<HopfAlgebra>, b: &InvariantBundle) -> Result<bool> {
    let reg = ModuleRep::regular(h);
    let k_abar = ModuleRep::one_dim(h, &b.alpha_bar)?;
    let s = h.antipode_map();
    let s4 = s.compose(&s)?.compose(&s)?.compose(&s)?;
    let source = k_abar.tensor(&reg)?;
    let target = reg.twisted_by(h, &s4)?.tensor(&k_abar)?;
    let phi = reg.operator(&b.g);
    Ok(source.module_map_witness(&target, &phi).is_none())
}

/// True iff g is grouplike and g e_i g⁻¹ = S²(e_i) for every basis element.
pub fn verify_pivotal(h: &HopfAlgebra, g: &SparseVec) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::InvalidParameter("pivotal candidate 0 is not invertible".into()));
    }
    if !h.check_grouplike(g) {
        return Ok(false);
    }
    let g_inv = h.antipode(g);
    let ok = (0..h.dim()).into_par_iter().all(|i| {
        let lhs = h.mul(&h.mul(g, &h.basis(i)), &g_inv);
        let rhs = h.antipode(h.antipode_basis(i));
        lhs == rhs
    });
    Ok(ok)
}

/// Serializable summary with labelled elements.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantSummary {
    pub integral: String,
    pub cointegral: String,
    pub alpha: Vec<(String, String)>,
    pub g: String,
    pub unimodular: bool,
    pub dual_unimodular: bool,
}

impl InvariantBundle {
    pub fn summary(&self, h: &HopfAlgebra, max_alpha: usize) -> InvariantSummary {
        let alpha = match h.presentation() {
            Some(p) => p
                .generators
                .iter()
                .map(|&g| (h.label(g).to_string(), self.alpha[g].to_string()))
                .collect(),
            None => (0..h.dim().min(max_alpha))
                .map(|i| (h.label(i).to_string(), self.alpha[i].to_string()))
                .collect(),
        };
        InvariantSummary {
            integral: h.format_element(&self.integral),
            cointegral: crate::hopf::format_vector(
                &self.cointegral,
                &h.labels().iter().map(|l| format!("d[{l}]")).collect::<Vec<_>>(),
            ),
            alpha,
            g: h.format_element(&self.g),
            unimodular: self.unimodular,
            dual_unimodular: self.dual_unimodular,
        }
    }

    /// Λ h = ⟨α, h⟩ Λ etc. re-checked on the given algebra (used by tests and
    /// reports as a self-check).
    pub fn self_check(&self, h: &HopfAlgebra) -> Option<String> {
        let f = h.field();
        let n = h.dim();
        if !self.cointegral.dot(&self.integral, f).is_one() {
            return Some("⟨λ, Λ⟩ != 1".into());
        }
        let left = testing_set(h).into_iter().find_map(|i| {
            (h.mul(&h.basis(i), &self.integral) != self.integral.scale(&h.counit()[i]))
                .then(|| format!("{}·Λ != ε·Λ", h.label(i)))
        });
        if left.is_some() {
            return left;
        }
        let co = (0..n).find_map(|i| {
            let mut acc = Vec::new();
            for (jk, c) in h.comul_basis(i).iter() {
                if let Some(l) = self.cointegral.get(jk / n) {
                    acc.push((jk % n, c * l));
                }
            }
            let expected = h.unit().scale(&self.cointegral.coeff(i, f));
            (SparseVec::from_entries(acc) != expected).then(|| format!("cointegral identity at {}", h.label(i)))
        });
        if co.is_some() {
            return co;
        }
        let conv = convolution(h, &self.alpha, &self.alpha_bar);
        (conv.as_slice() != h.counit()).then(|| "α ⋆ ᾱ != ε".into())
    }
}

/// S² as a linear map, handy for comparisons.
pub fn antipode_squared(h: &HopfAlgebra) -> Result<LinearMap> {
    let s = h.antipode_map();
    s.compose(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::scalar::Field;

    #[test]
    fn kz2_invariants() {
        let h = builtins::cyclic(2, &Field::rational()).unwrap();
        let b = invariants(&h).unwrap();
        assert_eq!(h.format_element(&b.integral), "1 + g");
        assert_eq!(b.cointegral, SparseVec::unit(0, h.field()));
        assert!(b.unimodular && b.dual_unimodular);
        assert_eq!(b.g, *h.unit());
        assert!(verify_radford(&h, &b).unwrap());
        assert!(verify_pivotal(&h, h.unit()).unwrap());
        assert!(b.self_check(&h).is_none());
    }

    #[test]
    fn uqsl2_three_invariants() {
        let h = builtins::uqsl2(3).unwrap();
        let b = invariants(&h).unwrap();
        assert_eq!(h.format_element(&b.integral), "E^2F^2 + E^2F^2K + E^2F^2K^2");
        assert!(b.unimodular);
        assert_eq!(h.format_element(&b.g), "K^2");
        assert!(verify_radford(&h, &b).unwrap());
        assert!(verify_pivotal(&h, &h.parse_element("K").unwrap()).unwrap());
        assert!(!verify_pivotal(&h, h.unit()).unwrap());
        assert!(b.self_check(&h).is_none());
    }

    #[test]
    fn taft_three_not_unimodular() {
        let h = builtins::taft(3, 2).unwrap();
        let b = invariants(&h).unwrap();
        assert!(!b.unimodular);
        let k = h.index_of("K").unwrap();
        let ak = &b.alpha[k];
        assert!(!ak.is_one());
        assert!(ak.pow(3).is_one());
        assert!(verify_radford(&h, &b).unwrap());
    }
}
