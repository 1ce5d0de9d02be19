//! Yetter–Drinfeld modules over H: tensor products, braiding, duals, pivot,
//! the functor T^L(H, -), internal natural transformation algebras and
//! Frobenius form checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::bimodule::{left_dual, HLBimodule, LeftDual};
use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::invariants::{invariants, verify_pivotal};
use crate::linalg::{LinearMap, Matrix, SparseVec, Subspace};
use crate::module::ModuleRep;
use crate::report::{Check, Report};
use crate::scalar::{Field, Scalar};

/// A left H-module with a compatible left H-coaction δ(e_i) = Σ c h_j ⊗ e_k
/// stored at `j * dim + k`.
#[derive(Clone, Debug)]
pub struct YDModule {
    module: ModuleRep,
    labels: Vec<String>,
    coaction: Vec<SparseVec>,
}

impl YDModule {
    pub fn from_parts(module: ModuleRep, labels: Vec<String>, coaction: Vec<SparseVec>) -> Result<Self> {
        let d = module.dim();
        let n = module.hopf().dim();
        if labels.len() != d || coaction.len() != d {
            return Err(Error::dim("one label and one coaction value per basis vector"));
        }
        if coaction.iter().any(|v| v.max_index().is_some_and(|m| m >= n * d)) {
            return Err(Error::dim("coaction index out of range"));
        }
        Ok(YDModule { module, labels, coaction })
    }

    pub fn new(module: ModuleRep, labels: Vec<String>, coaction: Vec<SparseVec>) -> Result<Self> {
        let x = YDModule::from_parts(module, labels, coaction)?;
        x.verify().into_result()?;
        Ok(x)
    }

    /// H with the adjoint action h·x = h_1 x S(h_2) and coaction Δ.
    pub fn adjoint(h: &Arc<HopfAlgebra>) -> Result<Self> {
        let f = h.field();
        let n = h.dim();
        let action = (0..n)
            .map(|i| {
                let d = h.comul_basis(i);
                LinearMap::from_fn(f, n, n, |x| {
                    let mut acc = SparseVec::new();
                    for (ab, c) in d.iter() {
                        let v = h.mul(h.mul_basis(ab / n, x), h.antipode_basis(ab % n));
                        acc = acc.add_scaled(&v, c);
                    }
                    acc
                })
            })
            .collect();
        let module = ModuleRep::new_unchecked(h.clone(), n, action)?;
        let coaction = (0..n).map(|i| h.comul_basis(i).clone()).collect();
        YDModule::new(module, h.labels().to_vec(), coaction)
    }

    /// k with action ε and coaction 1 ⊗ -.
    pub fn trivial(h: &Arc<HopfAlgebra>) -> Self {
        YDModule {
            module: ModuleRep::trivial(h),
            labels: vec!["1".into()],
            coaction: vec![h.unit().clone()],
        }
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        self.module.hopf()
    }

    pub fn field(&self) -> &Field {
        self.hopf().field()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn module(&self) -> &ModuleRep {
        &self.module
    }

    pub fn coaction_basis(&self, i: usize) -> &SparseVec {
        &self.coaction[i]
    }

    pub fn coact(&self, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(i, c)| (c, &self.coaction[i])))
    }

    pub fn verify(&self) -> Report {
        let h = self.hopf();
        let f = self.field();
        let (d, n) = (self.dim(), h.dim());
        let mut r = Report::new("Yetter-Drinfeld module");
        for c in self.module.verify().checks {
            r.push(c);
        }
        let coassoc = (0..d).find_map(|i| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for (jk, c) in self.coaction[i].iter() {
                let (j, k) = (jk / d, jk % d);
                for (ab, x) in h.comul_basis(j).iter() {
                    lhs.push((ab * d + k, c * x));
                }
                for (bk, x) in self.coaction[k].iter() {
                    rhs.push((j * n * d + bk, c * x));
                }
            }
            (SparseVec::from_entries(lhs) != SparseVec::from_entries(rhs)).then(|| self.labels[i].clone())
        });
        r.push(Check::from_witness("coassociativity", coassoc));
        let counit = (0..d).find_map(|i| {
            let v = SparseVec::from_entries(
                self.coaction[i].iter().map(|(jk, c)| (jk % d, c * &h.counit()[jk / d])).collect(),
            );
            (v != SparseVec::unit(i, f)).then(|| self.labels[i].clone())
        });
        r.push(Check::from_witness("counit", counit));
        // (h·x)_{-1} ⊗ (h·x)_0 = h_1 x_{-1} S(h_3) ⊗ h_2 x_0
        let compat = (0..n).find_map(|i| {
            let t = h.comul3(&SparseVec::unit(i, f));
            (0..d).find_map(|j| {
                let lhs = self.coact(&self.module.action()[i].cols[j]);
                let mut all = Vec::new();
                for (abc, c) in t.iter() {
                    let (a, b, cc) = (abc / (n * n), (abc / n) % n, abc % n);
                    for (yk, x) in self.coaction[j].iter() {
                        let left = h.mul(h.mul_basis(a, yk / d), h.antipode_basis(cc));
                        let right = &self.module.action()[b].cols[yk % d];
                        let cx = c * x;
                        for (p, u) in left.iter() {
                            let cu = &cx * u;
                            for (q, v) in right.iter() {
                                all.push((p * d + q, &cu * v));
                            }
                        }
                    }
                }
                (lhs != SparseVec::from_entries(all)).then(|| format!("{} · {}", h.label(i), self.labels[j]))
            })
        });
        r.push(Check::from_witness("yd_compatibility", compat));
        r
    }

    /// First failure of `phi` to be H-linear and H-colinear.
    pub fn morphism_witness(&self, target: &YDModule, phi: &LinearMap) -> Option<String> {
        if let Some(w) = self.module.module_map_witness(&target.module, phi) {
            return Some(format!("action of {w}"));
        }
        let id_phi = LinearMap::identity(self.field(), self.hopf().dim()).tensor(phi);
        (0..self.dim()).find_map(|i| {
            (target.coact(&phi.cols[i]) != id_phi.apply(&self.coaction[i]))
                .then(|| format!("coaction at {}", self.labels[i]))
        })
    }
}

pub fn yd_tensor(x: &YDModule, y: &YDModule) -> Result<YDModule> {
    let module = x.module.tensor(&y.module)?;
    let h = x.hopf();
    let (dx, dy) = (x.dim(), y.dim());
    let d = dx * dy;
    let coaction = (0..d)
        .map(|ij| {
            let mut all = Vec::new();
            for (ak, c1) in x.coaction[ij / dy].iter() {
                for (bl, c2) in y.coaction[ij % dy].iter() {
                    let c = c1 * c2;
                    for (hh, c3) in h.mul_basis(ak / dx, bl / dy).iter() {
                        all.push((hh * d + (ak % dx) * dy + bl % dy, c3 * &c));
                    }
                }
            }
            SparseVec::from_entries(all)
        })
        .collect();
    let labels = x
        .labels
        .iter()
        .flat_map(|a| y.labels.iter().map(move |b| format!("{a}⊗{b}")))
        .collect();
    YDModule::from_parts(module, labels, coaction)
}

/// c_{X,Y}(x ⊗ y) = x_{-1}·y ⊗ x_0.
pub fn braiding(x: &YDModule, y: &YDModule) -> LinearMap {
    let (dx, dy) = (x.dim(), y.dim());
    LinearMap::from_fn(x.field(), dx * dy, dy * dx, |ij| {
        let mut all = Vec::new();
        for (ak, c) in x.coaction[ij / dy].iter() {
            for (q, v) in y.module.action()[ak / dx].cols[ij % dy].iter() {
                all.push((q * dx + ak % dx, c * v));
            }
        }
        SparseVec::from_entries(all)
    })
}

/// The two hexagon identities
/// c_{X⊗Y,Z} = (c_{X,Z} ⊗ id)(id ⊗ c_{Y,Z}) and
/// c_{X,Y⊗Z} = (id ⊗ c_{X,Z})(c_{X,Y} ⊗ id).
pub fn hexagons(x: &YDModule, y: &YDModule, z: &YDModule) -> Result<(bool, bool)> {
    let f = x.field();
    let (dx, dy, dz) = (x.dim(), y.dim(), z.dim());
    let xy = yd_tensor(x, y)?;
    let yz = yd_tensor(y, z)?;
    let lhs1 = braiding(&xy, z);
    let rhs1 = braiding(x, z)
        .tensor(&LinearMap::identity(f, dy))
        .compose(&LinearMap::identity(f, dx).tensor(&braiding(y, z)))?;
    let lhs2 = braiding(x, &yz);
    let rhs2 = LinearMap::identity(f, dy)
        .tensor(&braiding(x, z))
        .compose(&braiding(x, y).tensor(&LinearMap::identity(f, dz)))?;
    Ok((lhs1 == rhs1, lhs2 == rhs2))
}

/// Checks that c_{X,Y} is an invertible morphism X ⊗ Y → Y ⊗ X.
pub fn braiding_witness(x: &YDModule, y: &YDModule) -> Result<Option<String>> {
    let c = braiding(x, y);
    if c.invert().is_err() {
        return Ok(Some("braiding is singular".into()));
    }
    Ok(yd_tensor(x, y)?.morphism_witness(&yd_tensor(y, x)?, &c))
}

/// A dual object with evaluation and coevaluation. For the right dual X∨,
/// ev: X∨ ⊗ X → k and coev: k → X ⊗ X∨; for the left dual ∨X,
/// ev: X ⊗ ∨X → k and coev: k → ∨X ⊗ X. Both use the dual basis.
#[derive(Clone, Debug)]
pub struct YDDual {
    pub dual: YDModule,
    pub ev: LinearMap,
    pub coev: LinearMap,
    pub right: bool,
}

/// Right dual X∨ with (h·f)(x) = f(S(h)x). The coaction is the unique one
/// making ev and coev colinear.
pub fn yd_dual(x: &YDModule) -> Result<YDDual> {
    dual_impl(x, true)
}

/// Left dual ∨X with (h·f)(x) = f(S⁻¹(h)x).
pub fn yd_left_dual(x: &YDModule) -> Result<YDDual> {
    dual_impl(x, false)
}

fn dual_impl(x: &YDModule, right: bool) -> Result<YDDual> {
    let h = x.hopf();
    let f = x.field().clone();
    let (d, n) = (x.dim(), h.dim());
    let twist: LinearMap = if right {
        h.antipode_map()
    } else {
        h.antipode_inverse()
            .cloned()
            .ok_or_else(|| Error::Singular)?
    };
    let action: Vec<LinearMap> = (0..n)
        .map(|i| transpose(&x.module.operator(&twist.cols[i])))
        .collect();
    let module = ModuleRep::new_unchecked(h.clone(), d, action)?;
    // Unknown u[(hh, k)]: δ(x^i) = Σ u hh ⊗ x^k. The ev condition for fixed
    // i gives a square system whose matrix does not depend on i.
    let prod = |a: usize, b: usize| if right { h.mul_basis(a, b) } else { h.mul_basis(b, a) };
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n * d];
    for j in 0..d {
        for (yk, c) in x.coaction[j].iter() {
            let (y, k) = (yk / d, yk % d);
            for hh in 0..n {
                for (t, v) in prod(hh, y).iter() {
                    cols[hh * d + k].push((j * n + t, c * v));
                }
            }
        }
    }
    let cols: Vec<SparseVec> = cols.into_iter().map(SparseVec::from_entries).collect();
    let m = Matrix::from_columns(&f, d * n, &cols)?;
    let inv = m
        .invert()
        .map_err(|_| Error::Inconsistent("dual coaction is not uniquely determined".into()))?;
    let coaction: Vec<SparseVec> = (0..d)
        .map(|i| {
            let rhs = SparseVec::from_entries(h.unit().iter().map(|(t, c)| (i * n + t, c.clone())).collect());
            inv.mul_vec(&rhs).expect("square")
        })
        .collect();
    let labels = x.labels.iter().map(|l| format!("{l}*")).collect();
    let dual = YDModule::from_parts(module, labels, coaction)?;
    if let Some(c) = dual.verify().failures().next() {
        return Err(Error::Inconsistent(format!("dual fails {}", c.name)));
    }
    let ev = LinearMap::from_fn(&f, d * d, 1, |ij| {
        if ij / d == ij % d { SparseVec::unit(0, &f) } else { SparseVec::new() }
    });
    let coev_vec = SparseVec::from_entries((0..d).map(|i| (i * d + i, f.one())).collect());
    let coev = LinearMap::new(&f, 1, d * d, vec![coev_vec])?;
    let out = YDDual { dual, ev, coev, right };
    out.check(x)?;
    Ok(out)
}

fn transpose(m: &LinearMap) -> LinearMap {
    let mut cols = vec![Vec::new(); m.cod];
    for (j, col) in m.cols.iter().enumerate() {
        for (i, c) in col.iter() {
            cols[i].push((j, c.clone()));
        }
    }
    LinearMap {
        field: m.field.clone(),
        dom: m.cod,
        cod: m.dom,
        cols: cols.into_iter().map(SparseVec::from_entries).collect(),
    }
}

impl YDDual {
    fn check(&self, x: &YDModule) -> Result<()> {
        let k = YDModule::trivial(x.hopf());
        let (ev_src, coev_dst) = if self.right {
            (yd_tensor(&self.dual, x)?, yd_tensor(x, &self.dual)?)
        } else {
            (yd_tensor(x, &self.dual)?, yd_tensor(&self.dual, x)?)
        };
        if let Some(w) = ev_src.morphism_witness(&k, &self.ev) {
            return Err(Error::Inconsistent(format!("ev is not a YD morphism: {w}")));
        }
        if let Some(w) = k.morphism_witness(&coev_dst, &self.coev) {
            return Err(Error::Inconsistent(format!("coev is not a YD morphism: {w}")));
        }
        let (z1, z2) = self.zigzags(x.dim());
        if !z1 || !z2 {
            return Err(Error::Inconsistent("dual zig-zag fails".into()));
        }
        Ok(())
    }

    /// Both zig-zag identities as equalities of linear maps.
    pub fn zigzags(&self, d: usize) -> (bool, bool) {
        let f = self.ev.field.clone();
        let id = LinearMap::identity(&f, d);
        // right dual: (id_X ⊗ ev)(coev ⊗ id_X) = id_X, (ev ⊗ id)(id ⊗ coev) = id_{X∨}
        // left dual: (ev ⊗ id_X)(id_X ⊗ coev) = id_X, (id ⊗ ev)(coev ⊗ id) = id_{∨X}
        let a = id.tensor(&self.ev).compose(&self.coev.tensor(&id));
        let b = self.ev.tensor(&id).compose(&id.tensor(&self.coev));
        match (a, b) {
            (Ok(a), Ok(b)) => (a == id, b == id),
            _ => (false, false),
        }
    }
}

/// x ↦ g·x followed by the canonical identification X → X∨∨, checked to be
/// a YD isomorphism. Requires g to be pivotal.
pub fn yd_pivot(x: &YDModule, g: &SparseVec) -> Result<(LinearMap, YDModule)> {
    let h = x.hopf();
    if !verify_pivotal(h, g)? {
        return Err(Error::InvalidParameter(format!(
            "{} is not a pivotal element",
            h.format_element(g)
        )));
    }
    let dd = yd_dual(&yd_dual(x)?.dual)?.dual;
    let p = x.module.operator(g);
    if let Some(w) = x.morphism_witness(&dd, &p) {
        return Err(Error::Inconsistent(format!("pivot is not a YD morphism: {w}")));
    }
    if p.invert().is_err() {
        return Err(Error::Inconsistent("pivot is not invertible".into()));
    }
    Ok((p, dd))
}

/// T^L(H, P) ⊂ Hom(H, P), with vectors indexed `h * dim P + p`.
#[derive(Clone, Debug)]
pub struct TModule {
    pub yd: YDModule,
    pub space: Subspace,
    pub target_dim: usize,
}

impl TModule {
    /// f(e_h) for the element with coordinates `c`.
    pub fn value(&self, c: &SparseVec, h: usize) -> SparseVec {
        let d = self.target_dim;
        let v = self.space.embed(c);
        SparseVec::from_entries(
            v.iter()
                .filter(|(i, _)| i / d == h)
                .map(|(i, x)| (i % d, x.clone()))
                .collect(),
        )
    }
}

pub fn t_l(p: &HLBimodule) -> Result<TModule> {
    let h = p.hopf().clone();
    let l = p.algebra().clone();
    let f = h.field().clone();
    let (n, dp, dl) = (h.dim(), p.dim(), l.dim());
    let nv = n * dp;
    let mut rows = Vec::new();
    for a in 0..dl {
        for hh in 0..n {
            // a ≻ g(h) - g(a_{-1} h) ≺ a_0, one row per output coordinate
            let mut eqs: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for q in 0..dp {
                for (o, c) in p.left_ops()[a].cols[q].iter() {
                    eqs.entry(o).or_default().push((hh * dp + q, c.clone()));
                }
            }
            for (yb, c) in l.coaction_basis(a).iter() {
                let (y, b) = (yb / dl, yb % dl);
                for (h2, m) in h.mul_basis(y, hh).iter() {
                    let cm = c * m;
                    for q in 0..dp {
                        for (o, v) in p.right_ops()[b].cols[q].iter() {
                            eqs.entry(o).or_default().push((h2 * dp + q, -&(&cm * v)));
                        }
                    }
                }
            }
            rows.extend(eqs.into_values().map(SparseVec::from_entries).filter(|r| !r.is_zero()));
        }
    }
    let system = Matrix::from_rows(&f, nv, rows)?;
    let space = Subspace::new(&f, nv, system.kernel());
    let m = space.dim();
    let coords = |v: &SparseVec| {
        space
            .coords(v)
            .ok_or_else(|| Error::Inconsistent("map left T^L(H, P)".into()))
    };
    // (h ⋆ g)(h') = g(h' h)
    let action = (0..n)
        .map(|hh| {
            let cols = (0..m)
                .map(|t| {
                    let g = space.vector(t);
                    let mut all = Vec::new();
                    for h1 in 0..n {
                        for (k, c) in h.mul_basis(h1, hh).iter() {
                            for (kq, x) in g.iter().filter(|(i, _)| i / dp == k) {
                                all.push((h1 * dp + kq % dp, c * x));
                            }
                        }
                    }
                    coords(&SparseVec::from_entries(all))
                })
                .collect::<Result<Vec<_>>>()?;
            LinearMap::new(&f, m, m, cols)
        })
        .collect::<Result<Vec<_>>>()?;
    // g ↦ S(h_1) g(h_2)_{-1} h_3 ⊗ g(h_2)_0, as a function of h
    let comul3: Vec<SparseVec> = (0..n).map(|i| h.comul3(&SparseVec::unit(i, &f))).collect();
    let coaction = (0..m)
        .map(|t| {
            let g = space.vector(t);
            let mut by_h: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for (i, t3) in comul3.iter().enumerate() {
                for (abc, c) in t3.iter() {
                    let (a, b, cc) = (abc / (n * n), (abc / n) % n, abc % n);
                    for (bq, x) in g.iter().filter(|(k, _)| k / dp == b) {
                        let cx = c * x;
                        for (yr, v) in p.coaction_basis(bq % dp).iter() {
                            let prod = h.mul(&h.mul(h.antipode_basis(a), &SparseVec::unit(yr / dp, &f)), &SparseVec::unit(cc, &f));
                            let cxv = &cx * v;
                            for (hh, w) in prod.iter() {
                                by_h.entry(hh).or_default().push((i * dp + yr % dp, &cxv * w));
                            }
                        }
                    }
                }
            }
            let mut all = Vec::new();
            for (hh, e) in by_h {
                for (s, c) in coords(&SparseVec::from_entries(e))?.iter() {
                    all.push((hh * m + s, c.clone()));
                }
            }
            Ok(SparseVec::from_entries(all))
        })
        .collect::<Result<Vec<_>>>()?;
    let module = ModuleRep::new_unchecked(h.clone(), m, action)?;
    let labels = (0..m).map(|t| format!("t{t}")).collect();
    let yd = YDModule::from_parts(module, labels, coaction)?;
    if let Some(c) = yd.verify().failures().next() {
        return Err(Error::Inconsistent(format!("T^L(H, P) fails {}", c.name)));
    }
    Ok(TModule {
        yd,
        space,
        target_dim: dp,
    })
}

/// An algebra in the Yetter–Drinfeld category.
#[derive(Clone, Debug)]
pub struct YDAlgebra {
    pub module: YDModule,
    pub mult: LinearMap,
    pub unit: SparseVec,
}

impl YDAlgebra {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.mult.apply(&crate::linalg::tensor_vec(x, y, self.dim()))
    }

    pub fn verify(&self) -> Report {
        let f = self.module.field().clone();
        let d = self.dim();
        let mut r = Report::new("algebra in YD");
        let e = |i: usize| SparseVec::unit(i, &f);
        let assoc = (0..d).find_map(|i| {
            (0..d).find_map(|j| {
                (0..d).find_map(|k| {
                    let lhs = self.mul(&self.mul(&e(i), &e(j)), &e(k));
                    let rhs = self.mul(&e(i), &self.mul(&e(j), &e(k)));
                    (lhs != rhs).then(|| format!("({i} {j}) {k}"))
                })
            })
        });
        r.push(Check::from_witness("associativity", assoc));
        let unit = (0..d).find_map(|i| {
            (self.mul(&self.unit, &e(i)) != e(i) || self.mul(&e(i), &self.unit) != e(i)).then(|| i.to_string())
        });
        r.push(Check::from_witness("unit", unit));
        let mm = yd_tensor(&self.module, &self.module)
            .ok()
            .and_then(|aa| aa.morphism_witness(&self.module, &self.mult));
        r.push(Check::from_witness("mult_yd_morphism", mm));
        let k = YDModule::trivial(self.module.hopf());
        let u = LinearMap::new(&f, 1, d, vec![self.unit.clone()]).expect("shape");
        r.push(Check::from_witness("unit_yd_morphism", k.morphism_witness(&self.module, &u)));
        r
    }

    /// m ∘ c_{A,A} = m.
    pub fn is_commutative(&self) -> bool {
        self.mult
            .compose(&braiding(&self.module, &self.module))
            .is_ok_and(|mc| mc == self.mult)
    }
}

/// T^L(H, †P ⊗_L P) with its multiplication.
#[derive(Clone, Debug)]
pub struct NatAlgebra {
    pub algebra: YDAlgebra,
    pub t: TModule,
    pub dual: LeftDual,
    /// Q = †P ⊗_L P → L, φ ⊗ p ↦ φ(1) p; only when P = L.
    pub unit_identification: Option<LinearMap>,
}

/// Builds the algebra of internal natural transformations of P. When
/// `p_is_unit` is set, P must be L itself and commutativity is enforced.
pub fn nat_algebra(p: &HLBimodule, p_is_unit: bool) -> Result<NatAlgebra> {
    let h = p.hopf().clone();
    let l = p.algebra().clone();
    let f = h.field().clone();
    let (n, dp, dl) = (h.dim(), p.dim(), l.dim());
    let dual = left_dual(p)?;
    let q = &dual.dual_p;
    let dq = q.module.dim();
    // κ: Q ⊗ Q → Q, (φ ⊗ p) ⊗ (φ' ⊗ p') ↦ φ ⊗ ev(p ⊗ φ') ≻ p'
    let kappa = LinearMap::from_fn(&f, dq * dq, dq, |st| {
        let (phi, pp) = q.representative(st / dq);
        let (phi2, pp2) = q.representative(st % dq);
        let val = dual.ev_pure(&SparseVec::unit(pp, &f), phi2, dl);
        let right = p.act_left(&val, &SparseVec::unit(pp2, &f));
        let v = SparseVec::from_entries(right.iter().map(|(r, c)| (phi * dp + r, c.clone())).collect());
        q.quotient.project(&v)
    });
    let t = t_l(&q.module)?;
    let m = t.space.dim();
    let coords = |v: &SparseVec| {
        t.space
            .coords(v)
            .ok_or_else(|| Error::Inconsistent("product left T^L(H, Q)".into()))
    };
    let comul: Vec<SparseVec> = (0..n).map(|i| h.comul_basis(i).clone()).collect();
    let mult_cols = (0..m * m)
        .map(|uv| {
            let (fu, gv) = (t.space.vector(uv / m), t.space.vector(uv % m));
            let mut all = Vec::new();
            for (i, d) in comul.iter().enumerate() {
                for (ab, c) in d.iter() {
                    let (a, b) = (ab / n, ab % n);
                    let fa = slice(fu, a, dq);
                    let gb = slice(gv, b, dq);
                    if fa.is_zero() || gb.is_zero() {
                        continue;
                    }
                    let prod = kappa.apply(&crate::linalg::tensor_vec(&fa, &gb, dq));
                    all.extend(prod.iter().map(|(r, x)| (i * dq + r, c * x)));
                }
            }
            coords(&SparseVec::from_entries(all))
        })
        .collect::<Result<Vec<_>>>()?;
    let mult = LinearMap::new(&f, m * m, m, mult_cols)?;
    // unit: h ↦ ε(h) coev(1_L)
    let one_q = dual.coev.apply(l.unit());
    let mut all = Vec::new();
    for (i, e) in h.counit().iter().enumerate() {
        if !e.is_zero() {
            all.extend(one_q.iter().map(|(r, x)| (i * dq + r, e * x)));
        }
    }
    let unit = coords(&SparseVec::from_entries(all))?;
    let algebra = YDAlgebra { module: t.yd.clone(), mult, unit };
    if let Some(c) = algebra.verify().failures().next() {
        return Err(Error::Inconsistent(format!("Nat algebra fails {}", c.name)));
    }
    let unit_identification = if p_is_unit {
        if !algebra.is_commutative() {
            return Err(Error::Inconsistent("T^L(H, L) is not braided commutative".into()));
        }
        Some(LinearMap::from_fn(&f, dq, dl, |s| {
            let (phi, pp) = q.representative(s);
            let at_one = dual.ev_pure(l.unit(), phi, dl);
            l.mul(&at_one, &SparseVec::unit(pp, &f))
        }))
    } else {
        None
    };
    Ok(NatAlgebra {
        algebra,
        t,
        dual,
        unit_identification,
    })
}

fn slice(v: &SparseVec, h: usize, d: usize) -> SparseVec {
    SparseVec::from_entries(
        v.iter()
            .filter(|(i, _)| i / d == h)
            .map(|(i, x)| (i % d, x.clone()))
            .collect(),
    )
}

impl NatAlgebra {
    fn hopf(&self) -> &Arc<HopfAlgebra> {
        self.algebra.module.hopf()
    }

    /// λ′(f) = f(Λ) for L = k, Λ the left integral.
    pub fn integral_form(&self) -> Result<Vec<Scalar>> {
        let h = self.hopf();
        let lam = invariants(h)?.integral.clone();
        self.evaluate_at(&lam)
    }

    /// λ′(f) = f(S(Λ)) for L = k; S(Λ) is a right integral.
    pub fn right_integral_form(&self) -> Result<Vec<Scalar>> {
        let h = self.hopf();
        let lam = h.antipode(&invariants(h)?.integral);
        self.evaluate_at(&lam)
    }

    fn evaluate_at(&self, x: &SparseVec) -> Result<Vec<Scalar>> {
        let iota = self
            .unit_identification
            .as_ref()
            .filter(|i| i.cod == 1)
            .ok_or_else(|| Error::InvalidParameter("integral forms need P = L = k".into()))?;
        let dq = self.t.target_dim;
        let f = self.hopf().field();
        Ok((0..self.algebra.dim())
            .map(|t| {
                let v = self.t.space.vector(t);
                let mut acc = SparseVec::new();
                for (i, c) in x.iter() {
                    acc = acc.add_scaled(&slice(v, i, dq), c);
                }
                iota.apply(&acc).coeff(0, f)
            })
            .collect())
    }

    /// λ′(f) = λ(f(1_H)) for L = H with δ = Δ.
    pub fn cointegral_form(&self) -> Result<Vec<Scalar>> {
        let iota = self
            .unit_identification
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("the cointegral form needs P = L".into()))?;
        let h = self.hopf();
        if iota.cod != h.dim() {
            return Err(Error::InvalidParameter("the cointegral form needs L = H".into()));
        }
        let lam = &invariants(h)?.cointegral;
        let dq = self.t.target_dim;
        Ok((0..self.algebra.dim())
            .map(|t| {
                let v = self.t.space.vector(t);
                let mut acc = SparseVec::new();
                for (i, c) in h.unit().iter() {
                    acc = acc.add_scaled(&slice(v, i, dq), c);
                }
                iota.apply(&acc).dot(lam, h.field())
            })
            .collect())
    }
}

/// All YD morphisms A → k, as covectors.
pub fn invariant_forms(a: &YDModule) -> Vec<Vec<Scalar>> {
    let h = a.hopf();
    let f = a.field();
    let (d, n) = (a.dim(), h.dim());
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..d {
            let mut r = a.module().action()[i].cols[j].clone();
            r = r.add_scaled(&SparseVec::unit(j, f), &-&h.counit()[i]);
            rows.push(r);
        }
    }
    for j in 0..d {
        let mut by_y: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (yk, c) in a.coaction_basis(j).iter() {
            by_y.entry(yk / d).or_default().push((yk % d, c.clone()));
        }
        for (y, c) in h.unit().iter() {
            by_y.entry(y).or_default().push((j, -c));
        }
        rows.extend(by_y.into_values().map(SparseVec::from_entries));
    }
    let m = Matrix::from_rows(f, d, rows.into_iter().filter(|r| !r.is_zero()).collect()).expect("shape");
    m.kernel().into_iter().map(|v| v.to_dense(d, f)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FormReport {
    pub yd_morphism: bool,
    pub nondegenerate: bool,
    pub pairing_rank: usize,
    pub dim: usize,
    /// `None` when the pairing is degenerate.
    pub frobenius_axioms: Option<bool>,
    pub commutative: bool,
    /// `None` when no pivotal element was supplied.
    pub symmetric: Option<bool>,
    pub notes: Vec<String>,
}

/// Checks λ′ as a Frobenius form on A: YD-morphism property, nondegeneracy of
/// β(x, y) = λ′(xy), the Frobenius law for the induced coproduct and, with
/// a pivotal element, the symmetry condition.
pub fn frobenius_form_check(a: &YDAlgebra, form: &[Scalar], pivot: Option<&SparseVec>) -> Result<FormReport> {
    let x = &a.module;
    let h = x.hopf();
    let f = x.field().clone();
    let d = a.dim();
    if form.len() != d {
        return Err(Error::dim("form length must equal dim A"));
    }
    let mut notes = Vec::new();
    let lam = LinearMap::new(&f, d, 1, form.iter().map(|c| SparseVec::single(0, c.clone())).collect())?;
    let k = YDModule::trivial(h);
    let witness = x.morphism_witness(&k, &lam);
    let yd_morphism = witness.is_none();
    if let Some(w) = witness {
        notes.push(format!("λ′ is not a YD morphism: {w}"));
    }
    // ε m
    let em = lam.compose(&a.mult)?;
    let beta = Matrix::from_dense(
        &f,
        &(0..d)
            .map(|i| (0..d).map(|j| em.cols[i * d + j].coeff(0, &f)).collect())
            .collect::<Vec<_>>(),
    )?;
    let pairing_rank = beta.rank();
    let nondegenerate = pairing_rank == d;
    let commutative = a.is_commutative();
    let mut frobenius_axioms = None;
    if nondegenerate {
        let gamma = beta.invert()?;
        // Δ(x) = Σ x e_i ⊗ e^i, e^i = Σ_j γ_ij e_j dual to e_i under β
        let comul = LinearMap::from_fn(&f, d, d * d, |xi| {
            let mut all = Vec::new();
            for i in 0..d {
                let prod = a.mult.cols[xi * d + i].clone();
                for j in 0..d {
                    let g = gamma.get(i, j);
                    if g.is_zero() {
                        continue;
                    }
                    for (r, c) in prod.iter() {
                        all.push((r * d + j, c * &g));
                    }
                }
            }
            SparseVec::from_entries(all)
        });
        let id = LinearMap::identity(&f, d);
        let law1 = a.mult.tensor(&id).compose(&id.tensor(&comul))?;
        let mid = comul.compose(&a.mult)?;
        let law2 = id.tensor(&a.mult).compose(&comul.tensor(&id))?;
        let coassoc = comul.tensor(&id).compose(&comul)? == id.tensor(&comul).compose(&comul)?;
        let counit = lam.tensor(&id).compose(&comul)? == id && id.tensor(&lam).compose(&comul)? == id;
        let ok = law1 == mid && mid == law2 && coassoc && counit;
        if !ok {
            notes.push("form does not induce Frobenius structure".into());
        }
        frobenius_axioms = Some(ok);
    }
    let symmetric = match pivot {
        Some(g) if nondegenerate => Some(symmetric_condition(a, &em, g)?),
        Some(_) => {
            notes.push("symmetry not evaluated: pairing is degenerate".into());
            None
        }
        None => None,
    };
    Ok(FormReport {
        yd_morphism,
        nondegenerate,
        pairing_rank,
        dim: d,
        frobenius_axioms,
        commutative,
        symmetric,
        notes,
    })
}

/// (εm ⊗ id_{A∨})(id_A ⊗ coev_A) = (p_{∨A} ⊗ εm)(coev~_A ⊗ id_A) as maps
/// A → A∨, identifying (∨A)∨∨ with A∨ through dual bases.
fn symmetric_condition(a: &YDAlgebra, em: &LinearMap, g: &SparseVec) -> Result<bool> {
    let x = &a.module;
    let f = x.field().clone();
    let d = a.dim();
    let right = yd_dual(x)?;
    let left = yd_left_dual(x)?;
    // (∨A)∨ ≅ A through the dual basis
    let back = yd_dual(&left.dual)?;
    if let Some(w) = x.morphism_witness(&back.dual, &LinearMap::identity(&f, d)) {
        return Err(Error::Inconsistent(format!("A is not identified with (∨A)∨: {w}")));
    }
    let (p, _) = yd_pivot(&left.dual, g)?;
    let id = LinearMap::identity(&f, d);
    let lhs = em.tensor(&id).compose(&id.tensor(&right.coev))?;
    let rhs = p.tensor(em).compose(&left.coev.tensor(&id))?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::comodule::ComoduleAlgebra;

    fn kz2() -> Arc<HopfAlgebra> {
        builtins::cyclic(2, &Field::rational()).unwrap()
    }

    /// Regular action, every vector of degree g.
    fn graded_regular(h: &Arc<HopfAlgebra>) -> YDModule {
        let g = h.index_of("g").unwrap();
        let coaction = (0..2).map(|i| SparseVec::unit(g * 2 + i, h.field())).collect();
        YDModule::new(ModuleRep::regular(h), h.labels().to_vec(), coaction).unwrap()
    }

    #[test]
    fn trivial_braiding_is_swap() {
        let h = kz2();
        let k = YDModule::trivial(&h);
        assert_eq!(braiding(&k, &k), LinearMap::identity(h.field(), 1));
    }

    #[test]
    fn graded_module_braiding_uses_action() {
        let h = kz2();
        let x = graded_regular(&h);
        let c = braiding(&x, &x);
        // c(1 ⊗ 1) = g·1 ⊗ 1 = g ⊗ 1, index (g, 1) = 2
        assert_eq!(c.cols[0], SparseVec::unit(2, h.field()));
        assert_eq!(braiding_witness(&x, &x).unwrap(), None);
        assert_eq!(hexagons(&x, &x, &x).unwrap(), (true, true));
        let d = yd_dual(&x).unwrap();
        assert_eq!(d.zigzags(2), (true, true));
    }

    #[test]
    fn adjoint_module_over_kz2() {
        let h = kz2();
        let x = YDModule::adjoint(&h).unwrap();
        let d = yd_dual(&x).unwrap();
        assert_eq!(d.zigzags(2), (true, true));
        let (p, _) = yd_pivot(&x, h.unit()).unwrap();
        assert_eq!(p, LinearMap::identity(h.field(), 2));
        assert!(yd_left_dual(&x).is_ok());
    }

    #[test]
    fn pivot_of_adjoint_uqsl2() {
        let h = builtins::uqsl2(3).unwrap();
        let x = YDModule::adjoint(&h).unwrap();
        let k = h.parse_element("K").unwrap();
        let (p, _) = yd_pivot(&x, &k).unwrap();
        assert_eq!(p, x.module().operator(&k));
        assert!(yd_pivot(&x, h.unit()).is_err());
    }

    #[test]
    fn convolution_algebra_on_dual() {
        let h = kz2();
        let l = Arc::new(ComoduleAlgebra::trivial(&h));
        let p = HLBimodule::regular(&l);
        let nat = nat_algebra(&p, true).unwrap();
        assert_eq!(nat.algebra.dim(), 2);
        let form = nat.integral_form().unwrap();
        let r = frobenius_form_check(&nat.algebra, &form, Some(h.unit())).unwrap();
        assert!(r.yd_morphism && r.nondegenerate && r.commutative);
        assert_eq!(r.frobenius_axioms, Some(true));
        assert_eq!(r.symmetric, Some(true));
    }

    #[test]
    fn regular_comodule_nat() {
        let h = kz2();
        let l = Arc::new(ComoduleAlgebra::regular(&h));
        let p = HLBimodule::regular(&l);
        let nat = nat_algebra(&p, true).unwrap();
        let form = nat.cointegral_form().unwrap();
        let r = frobenius_form_check(&nat.algebra, &form, None).unwrap();
        assert!(r.yd_morphism && r.nondegenerate);
        assert_eq!(r.frobenius_axioms, Some(true));
        assert_eq!(r.symmetric, None);
    }
}
