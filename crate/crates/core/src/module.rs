//! Finite-dimensional left modules over a Hopf algebra, stored as one
//! operator per basis element of the algebra.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::linalg::{LinearMap, SparseVec};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ModuleRep {
    hopf: Arc<HopfAlgebra>,
    dim: usize,
    action: Vec<LinearMap>,
}

impl ModuleRep {
    pub fn new_unchecked(hopf: Arc<HopfAlgebra>, dim: usize, action: Vec<LinearMap>) -> Result<Self> {
        if action.len() != hopf.dim() {
            return Err(Error::dim(format!(
                "{} operators for an algebra of dimension {}",
                action.len(),
                hopf.dim()
            )));
        }
        if action.iter().any(|a| a.dom != dim || a.cod != dim) {
            return Err(Error::dim(format!("operators must be {dim}x{dim}")));
        }
        Ok(ModuleRep { hopf, dim, action })
    }

    /// Builds a module and checks that the action respects multiplication and unit.
    pub fn new(hopf: Arc<HopfAlgebra>, dim: usize, action: Vec<LinearMap>) -> Result<Self> {
        let m = ModuleRep::new_unchecked(hopf, dim, action)?;
        m.verify().into_result()?;
        Ok(m)
    }

    /// H acting on itself by left multiplication (a module by associativity).
    pub fn regular(hopf: &Arc<HopfAlgebra>) -> Self {
        let action = (0..hopf.dim())
            .map(|i| hopf.left_mul_map(&hopf.basis(i)))
            .collect();
        ModuleRep {
            hopf: hopf.clone(),
            dim: hopf.dim(),
            action,
        }
    }

    /// k_φ for an algebra map φ: H → k.
    pub fn one_dim(hopf: &Arc<HopfAlgebra>, phi: &[Scalar]) -> Result<Self> {
        if phi.len() != hopf.dim() {
            return Err(Error::dim("character length must equal dim H"));
        }
        if let Some(w) = character_witness(hopf, phi) {
            return Err(Error::InvalidParameter(format!("not an algebra map: {w}")));
        }
        let f = hopf.field();
        let action = phi
            .iter()
            .map(|c| LinearMap::from_fn(f, 1, 1, |_| SparseVec::single(0, c.clone())))
            .collect();
        Ok(ModuleRep {
            hopf: hopf.clone(),
            dim: 1,
            action,
        })
    }

    /// The unit object k_ε.
    pub fn trivial(hopf: &Arc<HopfAlgebra>) -> Self {
        ModuleRep::one_dim(hopf, hopf.counit()).expect("counit is a character")
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[LinearMap] {
        &self.action
    }

    /// Operator of an arbitrary element of H.
    pub fn operator(&self, h: &SparseVec) -> LinearMap {
        let f = self.hopf.field();
        let mut cols = vec![Vec::new(); self.dim];
        for (i, c) in h.iter() {
            for (j, col) in self.action[i].cols.iter().enumerate() {
                for (k, x) in col.iter() {
                    cols[j].push((k, x * c));
                }
            }
        }
        LinearMap {
            field: f.clone(),
            dom: self.dim,
            cod: self.dim,
            cols: cols.into_iter().map(SparseVec::from_entries).collect(),
        }
    }

    pub fn act(&self, h: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut all = Vec::new();
        for (i, c) in h.iter() {
            for (k, x) in self.action[i].apply(x).iter() {
                all.push((k, x * c));
            }
        }
        SparseVec::from_entries(all)
    }

    /// M_f: the module pulled back along an algebra map `f: source → H`.
    pub fn twisted_by(&self, source: &Arc<HopfAlgebra>, f: &LinearMap) -> Result<Self> {
        if f.dom != source.dim() || f.cod != self.hopf.dim() {
            return Err(Error::dim("twisting map has wrong shape"));
        }
        let action = f.cols.iter().map(|img| self.operator(img)).collect();
        ModuleRep::new_unchecked(source.clone(), self.dim, action)
    }

    /// X ⊗ Y with h acting as h_1 ⊗ h_2.
    pub fn tensor(&self, other: &ModuleRep) -> Result<Self> {
        if !Arc::ptr_eq(&self.hopf, &other.hopf) && self.hopf.fingerprint() != other.hopf.fingerprint() {
            return Err(Error::InvalidParameter("modules over different algebras".into()));
        }
        let n = self.hopf.dim();
        let action = (0..n)
            .map(|i| {
                let mut acc = LinearMap::zero(self.hopf.field(), self.dim * other.dim, self.dim * other.dim);
                for (ab, c) in self.hopf.comul_basis(i).iter() {
                    let t = self.action[ab / n].tensor(&other.action[ab % n]).scale(c);
                    acc = acc.add(&t);
                }
                acc
            })
            .collect();
        ModuleRep::new_unchecked(self.hopf.clone(), self.dim * other.dim, action)
    }

    pub fn direct_sum(&self, other: &ModuleRep) -> Result<Self> {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut cols = a.cols.clone();
                cols.extend(b.cols.iter().map(|c| c.reindex(|i| i + self.dim)));
                LinearMap {
                    field: a.field.clone(),
                    dom: d,
                    cod: d,
                    cols,
                }
            })
            .collect();
        ModuleRep::new_unchecked(self.hopf.clone(), d, action)
    }

    /// Checks h·(h'·x) = (hh')·x and 1·x = x. With a presentation the
    /// relations are checked on generator operators and the remaining
    /// operators against their witnesses.
    pub fn verify(&self) -> Report {
        let h = &self.hopf;
        let n = h.dim();
        let mut r = Report::new("module");
        let unit_op = self.operator(h.unit());
        let unit = (unit_op != LinearMap::identity(h.field(), self.dim)).then(|| "1 does not act as identity".to_string());
        r.push(Check::from_witness("unit_action", unit));
        let w = match h.presentation() {
            Some(p) if n > crate::hopf::EXHAUSTIVE_LIMIT => {
                let rel = p.relations.iter().enumerate().find_map(|(ri, rel)| {
                    let mut acc = LinearMap::zero(h.field(), self.dim, self.dim);
                    for t in rel {
                        let mut op = LinearMap::identity(h.field(), self.dim);
                        for &g in &t.word {
                            op = op.compose(&self.action[p.generators[g]]).expect("square");
                        }
                        acc = acc.add(&op.scale(&t.coeff));
                    }
                    acc.cols.iter().any(|c| !c.is_zero()).then(|| format!("relation {ri}"))
                });
                rel.or_else(|| {
                    (0..n).find_map(|i| {
                        let wi = p.witness[i].as_ref()?;
                        let expect = self.action[p.generators[wi.gen]]
                            .compose(&self.action[wi.rest])
                            .expect("square")
                            .scale(&wi.coeff);
                        (expect != self.action[i]).then(|| h.label(i).to_string())
                    })
                })
            }
            _ => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    let prod = self.action[i].compose(&self.action[j]).expect("square");
                    prod != self.operator(h.mul_basis(i, j))
                })
                .map(|(i, j)| format!("{} * {}", h.label(i), h.label(j))),
        };
        r.push(Check::from_witness("multiplicative_action", w));
        r
    }

    /// First basis element of H whose action `phi` fails to intertwine.
    pub fn module_map_witness(&self, target: &ModuleRep, phi: &LinearMap) -> Option<String> {
        (0..self.hopf.dim()).find_map(|i| {
            let left = phi.compose(&self.action[i]).ok()?;
            let right = target.action[i].compose(phi).ok()?;
            (left != right).then(|| self.hopf.label(i).to_string())
        })
    }
}

/// Witness that `phi` is not an algebra map H → k, if any.
pub fn character_witness(h: &HopfAlgebra, phi: &[Scalar]) -> Option<String> {
    let n = h.dim();
    let f = h.field();
    let eval = |v: &SparseVec| v.dot_dense(phi, f);
    if !eval(h.unit()).is_one() {
        return Some("φ(1) != 1".into());
    }
    match h.presentation() {
        Some(p) if n > crate::hopf::EXHAUSTIVE_LIMIT => {
            let rel = p.relations.iter().enumerate().find_map(|(ri, rel)| {
                let mut total = f.zero();
                for t in rel {
                    let mut v = t.coeff.clone();
                    for &g in &t.word {
                        v = &v * &phi[p.generators[g]];
                    }
                    total = &total + &v;
                }
                (!total.is_zero()).then(|| format!("relation {ri}"))
            });
            rel.or_else(|| {
                (0..n).find_map(|i| {
                    let w = p.witness[i].as_ref()?;
                    let expect = &(&w.coeff * &phi[p.generators[w.gen]]) * &phi[w.rest];
                    (expect != phi[i]).then(|| h.label(i).to_string())
                })
            })
        }
        _ => (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| eval(h.mul_basis(i, j)) != &phi[i] * &phi[j])
            .map(|(i, j)| format!("φ({} * {})", h.label(i), h.label(j))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::scalar::Field;

    #[test]
    fn regular_and_trivial_modules_verify() {
        let h = builtins::cyclic(2, &Field::rational()).unwrap();
        assert!(ModuleRep::regular(&h).verify().all_passed());
        let t = ModuleRep::trivial(&h);
        assert_eq!(t.dim(), 1);
        let twisted = t.twisted_by(&h, &LinearMap::identity(h.field(), 2)).unwrap();
        assert_eq!(twisted.action(), t.action());
    }

    #[test]
    fn non_character_rejected() {
        let h = builtins::cyclic(3, &Field::rational()).unwrap();
        let f = h.field();
        let phi = vec![f.one(), f.from_int(2), f.from_int(4)];
        assert!(ModuleRep::one_dim(&h, &phi).is_err());
    }

    #[test]
    fn tensor_with_trivial_is_identity_shaped() {
        let h = builtins::taft(3, 2).unwrap();
        let reg = ModuleRep::regular(&h);
        let t = ModuleRep::trivial(&h).tensor(&reg).unwrap();
        assert_eq!(t.dim(), 9);
        assert!(t.verify().all_passed());
        assert!(reg
            .module_map_witness(&t, &LinearMap::identity(h.field(), 9))
            .is_none());
    }
}
