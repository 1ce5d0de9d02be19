//! Property checks shared by the acceptance harness and the proptest suite.
#![allow(dead_code)]

use std::sync::Arc;

use hopfkit::bimodule::left_dual;
use hopfkit::invariants::{cointegral_space, integral_space, invariants};
use hopfkit::maps::{classify, half_braiding, half_braiding_multiplicative, projective_test};
use hopfkit::yd::{frobenius_form_check, hexagons, nat_algebra, yd_dual, yd_left_dual};
use hopfkit::*;

pub type Check = std::result::Result<(), String>;

/// Every Hopf builtin the property suites run on.
pub const HOPF_BUILTINS: &[&str] = &[
    "trivial",
    "cyclic(2)",
    "cyclic(3)",
    "group_algebra(Z2xZ2)",
    "group_algebra(S3)",
    "taft(2, 1)",
    "taft(3)",
    "taft(3, 1)",
    "k_power(3, 1)",
    "k_power(9, 3)",
    "dual_of(taft(3))",
    "dual_of(group_algebra(S3))",
    "uqsl2(3)",
];

/// Map builtins beyond identity, unit and counit of each Hopf builtin.
pub const MAP_BUILTINS: &[&str] = &["subalg_K_power(3, 1)", "inclusion_taft(3)", "subalg_K_power(9, 3)"];

pub fn hopf(desc: &str) -> Arc<HopfAlgebra> {
    desc.parse::<Descriptor>()
        .and_then(|d| d.resolve_hopf())
        .unwrap_or_else(|e| panic!("{desc}: {e}"))
}

pub fn map(desc: &str) -> Arc<BialgebraMap> {
    desc.parse::<Descriptor>()
        .and_then(|d| d.resolve_map())
        .unwrap_or_else(|e| panic!("{desc}: {e}"))
}

/// Identity, unit and counit of every Hopf builtin up to `max_dim`, plus the
/// named map builtins.
pub fn generated_maps(max_dim: usize) -> Vec<Arc<BialgebraMap>> {
    let mut out: Vec<Arc<BialgebraMap>> = Vec::new();
    for d in HOPF_BUILTINS {
        let h = hopf(d);
        if h.dim() > max_dim {
            continue;
        }
        out.push(Arc::new(BialgebraMap::identity(&h)));
        out.push(Arc::new(BialgebraMap::unit_map(&h).unwrap()));
        out.push(Arc::new(BialgebraMap::counit_map(&h).unwrap()));
    }
    out.extend(MAP_BUILTINS.iter().map(|d| map(d)));
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// (a) one-dimensional integral and cointegral spaces with ⟨λ, Λ⟩ ≠ 0.
pub fn integrals(h: &HopfAlgebra) -> Check {
    let li = integral_space(h);
    let lc = cointegral_space(h);
    ensure(li.len() == 1 && lc.len() == 1, || {
        format!("{}: integral dims {} / {}", h.name(), li.len(), lc.len())
    })?;
    let pairing = lc[0].dot(&li[0], h.field());
    ensure(!pairing.is_zero(), || format!("{}: ⟨λ, Λ⟩ = 0", h.name()))
}

/// (b) χ_f = ε agrees with α_H ∘ f = α_{H′}, recomputed here from the bundles.
pub fn frobenius_tests_agree(f: &BialgebraMap) -> Check {
    let c = classify(f, PerfectMode::Auto).map_err(|e| format!("{}: {e}", f.name()))?;
    let bs = invariants(f.source()).map_err(|e| e.to_string())?;
    let bt = invariants(f.target()).map_err(|e| e.to_string())?;
    let field = f.source().field();
    let alpha_f: Vec<Scalar> = f.matrix().cols.iter().map(|v| v.dot_dense(&bt.alpha, field)).collect();
    let chi_is_eps = c.chi_f.as_slice() == f.source().counit();
    ensure(chi_is_eps == (alpha_f == bs.alpha) && chi_is_eps == c.frobenius, || {
        format!("{}: Frobenius tests disagree", f.name())
    })
}

/// (c) σ_X is an invertible H′-module map (checked inside `half_braiding`)
/// and σ_{X⊗Y} = σ_X ⊗ σ_Y.
pub fn half_braiding_props(f: &BialgebraMap, x: &ModuleRep, y: &ModuleRep) -> Check {
    half_braiding(f, x).map_err(|e| format!("{}: {e}", f.name()))?;
    let mult = half_braiding_multiplicative(f, x, y).map_err(|e| format!("{}: {e}", f.name()))?;
    ensure(mult, || format!("{}: half-braiding not multiplicative", f.name()))
}

/// (d) zig-zags for †P, P = L as a bimodule over itself.
pub fn dagger_zigzags(l: &Arc<ComoduleAlgebra>) -> Check {
    let p = HLBimodule::regular(l);
    let d = left_dual(&p).map_err(|e| e.to_string())?;
    let (z1, z2) = d.zigzags(&p);
    ensure(z1 && z2, || format!("†P zig-zag over {}", l.hopf().name()))
}

/// (d) zig-zags for both duals of a YD module.
pub fn yd_zigzags(x: &YDModule) -> Check {
    for d in [yd_dual(x), yd_left_dual(x)] {
        let d = d.map_err(|e| e.to_string())?;
        let (z1, z2) = d.zigzags(x.dim());
        ensure(z1 && z2, || format!("yd dual zig-zag over {}", x.hopf().name()))?;
    }
    Ok(())
}

/// (e) both hexagon identities.
pub fn hexagon(x: &YDModule, y: &YDModule, z: &YDModule) -> Check {
    let (a, b) = hexagons(x, y, z).map_err(|e| e.to_string())?;
    ensure(a && b, || format!("hexagon over {}: ({a}, {b})", x.hopf().name()))
}

/// (f) free modules are projective.
pub fn free_is_projective(h: &Arc<HopfAlgebra>, copies: usize) -> Check {
    let mut m = ModuleRep::regular(h);
    for _ in 1..copies {
        m = m.direct_sum(&ModuleRep::regular(h)).unwrap();
    }
    ensure(projective_test(&m), || format!("H^{copies} over {} not projective", h.name()))
}

/// (g) rescaling λ′ leaves the form report unchanged.
pub fn rescaling_invariance(h: &Arc<HopfAlgebra>, c: &Scalar) -> Check {
    let l = Arc::new(ComoduleAlgebra::trivial(h));
    let nat = nat_algebra(&HLBimodule::regular(&l), true).map_err(|e| e.to_string())?;
    let form = nat.integral_form().map_err(|e| e.to_string())?;
    let scaled: Vec<Scalar> = form.iter().map(|x| x * c).collect();
    let a = frobenius_form_check(&nat.algebra, &form, None).map_err(|e| e.to_string())?;
    let b = frobenius_form_check(&nat.algebra, &scaled, None).map_err(|e| e.to_string())?;
    let (a, b) = (serde_json::to_value(a).unwrap(), serde_json::to_value(b).unwrap());
    ensure(a == b, || format!("{}: rescaled report differs: {a} vs {b}", h.name()))
}
