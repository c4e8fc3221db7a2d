//! Classification reports: the kernel of the trace map, the fibration of
//! sheaf classes over characters of the rational points, and smooth models
//! assembled from a connected part and a component group.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::EtaleGroupModel;
use crate::fgab::{
    add_characters, all_characters, dual_of_coinvariants, Character, DualStructure, FgAbGroup,
    FixedAlternating, FrobModule, GroupHom,
};
use crate::intlat::IntMatrix;
use crate::qcsheaf::{
    enumerate_classes, is_isomorphic, kernel_sheaf, sheaf_from_character, tensor, ClassInvariant, QCSheafModel,
};

/// `Hom((Λ²π₀)_F, E^×)`; works for free components too.
pub fn kernel_structure(m: &FrobModule) -> DualStructure {
    dual_of_coinvariants(&m.exterior_square())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub trace: Character,
    pub kernel: Character,
    #[serde(skip)]
    pub representative: QCSheafModel,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub fixed_points: FgAbGroup,
    pub kernel_group: FgAbGroup,
    pub characters: u64,
    pub kernel: u64,
    pub total: u64,
    /// The section `χ ↦ sheaf_from_character(χ)` is multiplicative up to
    /// isomorphism.
    pub split: bool,
    /// Enumerated classes agree with the fibration, when within the bound.
    pub cross_checked: Option<bool>,
    pub classes: Vec<ClassEntry>,
}

/// Classes fibred over the characters of `A^F`: for each `χ` the section
/// sheaf tensored with every kernel class.
pub fn classify(e: &EtaleGroupModel, bound: usize) -> Result<Classification> {
    let fa = FixedAlternating::new(e.module());
    let (fixed, _) = e.fixed_points();
    let chars = all_characters(&fixed)?;
    let psis = all_characters(fa.group())?;

    let sections: Vec<QCSheafModel> = chars
        .iter()
        .map(|chi| sheaf_from_character(e, chi))
        .collect::<Result<_>>()?;
    let kernels: Vec<QCSheafModel> = psis
        .iter()
        .map(|psi| kernel_sheaf(e, &fa, psi))
        .collect::<Result<_>>()?;

    let mut classes = Vec::with_capacity(chars.len() * psis.len());
    for (chi, s) in chars.iter().zip(&sections) {
        for (psi, k) in psis.iter().zip(&kernels) {
            let q = tensor(s, k)?;
            let inv = ClassInvariant::of(&q, &fa);
            if &inv.trace != chi || &inv.kernel != psi || !q.is_valid() {
                return Err(Error::InvariantViolation(format!(
                    "representative for ({chi:?}, {psi:?}) has invariant {inv:?}"
                )));
            }
            classes.push(ClassEntry {
                trace: chi.clone(),
                kernel: psi.clone(),
                representative: q,
            });
        }
    }

    let mut split = true;
    for (i, c1) in chars.iter().enumerate() {
        for (j, c2) in chars.iter().enumerate().skip(i) {
            let lhs = tensor(&sections[i], &sections[j])?;
            let rhs = sheaf_from_character(e, &add_characters(c1, c2))?;
            if !is_isomorphic(&lhs, &rhs)?.is_isomorphic() {
                split = false;
            }
        }
    }

    let cross_checked = if e.order() <= bound {
        let reps = enumerate_classes(e, crate::cohomology::CLASS_LIMIT)?;
        let ours: HashSet<(Character, Character)> = classes
            .iter()
            .map(|c| (c.trace.clone(), c.kernel.clone()))
            .collect();
        let theirs: HashSet<(Character, Character)> = reps
            .iter()
            .map(|q| {
                let inv = ClassInvariant::of(q, &fa);
                (inv.trace, inv.kernel)
            })
            .collect();
        Some(reps.len() == classes.len() && ours == theirs)
    } else {
        None
    };

    Ok(Classification {
        fixed_points: fixed,
        kernel_group: fa.group().clone(),
        characters: chars.len() as u64,
        kernel: psis.len() as u64,
        total: classes.len() as u64,
        split,
        cross_checked,
        classes,
    })
}

/// `G(k)` with its maps `G⁰(k) → G(k) → π₀`; the projection lands in the
/// geometric points of `π₀` and must be Frobenius-fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoints {
    pub group: FgAbGroup,
    pub inclusion: IntMatrix,
    pub projection: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothModel {
    pub identity_component_points: FgAbGroup,
    pub pi0: EtaleGroupModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_points: Option<RationalPoints>,
}

impl SmoothModel {
    /// Checks `0 → G⁰(k) → G(k) → π₀(k) → 0` when `G(k)` is supplied.
    pub fn validate(&self) -> Result<()> {
        let g0 = &self.identity_component_points;
        if !g0.is_finite() {
            return Err(Error::Infinite(g0.factors().to_vec()));
        }
        let Some(rp) = &self.rational_points else {
            return Ok(());
        };
        let bad = |m: &str| Err(Error::InvariantViolation(m.to_string()));
        if !rp.group.is_finite() {
            return Err(Error::Infinite(rp.group.factors().to_vec()));
        }
        let i = GroupHom::new(g0.clone(), rp.group.clone(), rp.inclusion.clone())?;
        let p = GroupHom::new(rp.group.clone(), self.pi0.points().clone(), rp.projection.clone())?;
        if !i.is_injective() {
            return bad("G0(k) -> G(k) is not injective");
        }
        if !self.pi0.frob().compose(&p)?.sub(&p)?.is_zero() {
            return bad("G(k) -> pi0 does not land in Frobenius-fixed points");
        }
        if !p.compose(&i)?.is_zero() {
            return bad("composite G0(k) -> G(k) -> pi0 is not zero");
        }
        let fixed = self.pi0.fixed_points().0.order().expect("finite");
        let image = p.image().0.order().expect("finite");
        if image != fixed {
            return bad("G(k) -> pi0(k) is not surjective");
        }
        let (g, g0o) = (rp.group.order().unwrap(), g0.order().unwrap());
        if g != g0o * fixed {
            return bad("orders do not multiply along the sequence");
        }
        // |ker p| = |G|/|im p| = |G0| = |im i| and im i ⊆ ker p, so they agree
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceOrders {
    /// `|QC(π₀)/iso|`.
    pub component: u64,
    /// `|QC(G)/iso|`.
    pub total: u64,
    /// `|G⁰(k)^*|`.
    pub connected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothReport {
    pub qciso_order: u64,
    pub kernel: DualStructure,
    pub aut: DualStructure,
    pub sequence: SequenceOrders,
    pub rational_points_order: u64,
    pub cross_checked: bool,
    pub note: Option<String>,
}

pub fn smooth_model_report(s: &SmoothModel, bound: usize) -> Result<SmoothReport> {
    s.validate()?;
    let kernel = kernel_structure(s.pi0.module());
    let aut = dual_of_coinvariants(s.pi0.module());
    let fixed = s.pi0.fixed_points().0.order().expect("finite");
    let g0 = s.identity_component_points.order().expect("finite");
    let rational_points_order = match &s.rational_points {
        Some(rp) => rp.group.order().expect("finite"),
        None => g0 * fixed,
    };
    let k = kernel.order().expect("finite component group");
    let component = k * fixed;
    let qciso_order = k * rational_points_order;
    let cross_checked = if s.pi0.order() <= bound {
        let c = classify(&s.pi0, bound)?;
        c.cross_checked == Some(true) && c.split && c.total == component
    } else {
        false
    };
    let note = s.rational_points.is_none().then(|| {
        "G(k) not supplied: its order is taken from Lang exactness; the extension class is not needed"
            .to_string()
    });
    Ok(SmoothReport {
        qciso_order,
        kernel,
        aut,
        sequence: SequenceOrders {
            component,
            total: qciso_order,
            connected: g0,
        },
        rational_points_order,
        cross_checked,
        note,
    })
}

/// `G(k) = G⁰(k) ⊕ π₀(k)` with the obvious maps, for tests and examples.
pub fn split_rational_points(g0: &FgAbGroup, pi0: &EtaleGroupModel) -> RationalPoints {
    let (fixed, incl) = pi0.fixed_points();
    let sum = crate::fgab::DirectSum::new(&[g0.clone(), fixed]);
    let i = sum.injection(0).matrix().clone();
    let p = incl.compose(&sum.projection(1)).expect("composable");
    RationalPoints {
        group: sum.group().clone(),
        inclusion: i,
        projection: p.matrix().clone(),
    }
}
