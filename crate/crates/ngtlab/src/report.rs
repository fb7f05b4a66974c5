//! Check suites over sampled points and the serializable report.

use serde::Serialize;

use crate::geometry;
use crate::manifolds::Manifold;
use crate::ngt;
use crate::sampling;
use crate::structures::{self, StructureKind};
use crate::tensor::PointFrame;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Informational records never gate the overall outcome and are
    /// always reported as indeterminate.
    pub informational: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub manifold: String,
    pub suite: String,
    pub seed: u64,
    pub points: usize,
    pub skipped_points: usize,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    /// True iff every non-informational check passes.
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.informational || c.verdict == Verdict::Pass)
    }

    /// Stable JSON rendering; no wall time or other run-dependent data,
    /// so identical inputs give byte-identical output.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Human-readable table.
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "manifold: {}\nsuite: {}  seed: {}  points: {}",
            self.manifold, self.suite, self.seed, self.points
        );
        if self.skipped_points > 0 {
            out.push_str(&format!("  (skipped {})", self.skipped_points));
        }
        out.push('\n');
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let verdict = if c.informational {
                "info"
            } else {
                match c.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Indeterminate => "indeterminate - refine sampling",
                }
            };
            out.push_str(&format!(
                "  {:width$}  [{:10}]  residual {:10.3e}  tol {:8.1e}  {}\n",
                c.name, c.anchor, c.max_residual, c.tolerance, verdict,
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Auto,
    Generic,
    Hermitian,
    ParaHermitian,
    Contact,
    Paracontact,
    Ngt,
    Eisenhart,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        Ok(match s {
            "auto" => Suite::Auto,
            "generic" => Suite::Generic,
            "hermitian" => Suite::Hermitian,
            "para-hermitian" => Suite::ParaHermitian,
            "contact" => Suite::Contact,
            "paracontact" => Suite::Paracontact,
            "ngt" => Suite::Ngt,
            "eisenhart" => Suite::Eisenhart,
            other => {
                return Err(Error::Spec(format!(
                    "unknown suite `{other}` (expected auto|generic|hermitian|para-hermitian|\
                     contact|paracontact|ngt|eisenhart)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Auto => "auto",
            Suite::Generic => "generic",
            Suite::Hermitian => "hermitian",
            Suite::ParaHermitian => "para-hermitian",
            Suite::Contact => "contact",
            Suite::Paracontact => "paracontact",
            Suite::Ngt => "ngt",
            Suite::Eisenhart => "eisenhart",
        }
    }
}

#[derive(Clone, Copy)]
enum Tier {
    /// Algebraic structure invariants.
    Structural,
    /// Derived identities involving first derivatives.
    Derived,
}

struct Obs {
    name: &'static str,
    anchor: &'static str,
    tier: Tier,
    informational: bool,
    value: f64,
}

fn obs(name: &'static str, anchor: &'static str, tier: Tier, value: f64) -> Obs {
    Obs { name, anchor, tier, informational: false, value }
}

fn info(name: &'static str, anchor: &'static str, value: f64) -> Obs {
    Obs { name, anchor, tier: Tier::Derived, informational: true, value }
}

fn generic_obs(fr: &PointFrame) -> Result<Vec<Obs>> {
    let mut v = vec![obs(
        "skew-torsion-existence",
        "ndf1",
        Tier::Derived,
        geometry::skew_existence_residual(fr),
    )];
    let sk = geometry::skew_torsion_connection(fr)?;
    v.push(obs("skew-connection-torsion", "tor1", Tier::Derived, sk.skew_residual));
    v.push(obs("skew-connection-nabla-g", "skct", Tier::Derived, sk.nabla_g_residual));
    v.push(obs("skew-connection-nabla-f", "skct", Tier::Derived, sk.nabla_f_residual));
    v.extend(eisenhart_obs(fr));
    Ok(v)
}

fn eisenhart_obs(fr: &PointFrame) -> Vec<Obs> {
    let gamma = geometry::eisenhart_connection(fr);
    let torsion_df = geometry::lowered_torsion(&gamma, fr).sub(&fr.df()).max_abs();
    vec![
        obs("eisenhart-torsion-df", "Eisen1", Tier::Derived, torsion_df),
        obs("eisenhart-nabla-g", "Eisen1", Tier::Derived, geometry::nabla_g(&gamma, fr).max_abs()),
        obs(
            "eisenhart-nijenhuis",
            "EisenhN1",
            Tier::Derived,
            geometry::nijenhuis_via_lc_f_residual(fr),
        ),
    ]
}

fn ngt_obs(fr: &PointFrame) -> Vec<Obs> {
    let p = ngt::ngt_skew_pipeline(fr);
    vec![
        obs("skew-condition", "skew1", Tier::Derived, p.condition_residual),
        obs("einstein-metricity", "metein", Tier::Derived, p.metricity_residual),
        obs("torsion-is-minus-third-df", "tordfnew", Tier::Derived, p.torsion_residual),
        obs("connection-nabla-g-form", "skew0", Tier::Derived, p.nabla_g_residual),
        obs("connection-nabla-f-form", "skew0", Tier::Derived, p.nabla_f_residual),
        obs("lc-nabla-f-form", "ff2", Tier::Derived, p.lc_nabla_f_residual),
        obs("lc-connection-form", "ff1", Tier::Derived, p.ff1_residual),
        obs("metricity-form", "newnbl", Tier::Derived, p.metricity_form_residual),
    ]
}

fn hermitian_obs(fr: &PointFrame) -> Result<Vec<Obs>> {
    let s = structures::structure_residual(fr, StructureKind::AlmostHermitian)?;
    let sk = structures::hermitian_skew_torsion(fr);
    let eq = structures::hermitian_ngt_equivalence(fr);
    let mut v = vec![
        obs("structure-invariants", "skewah", Tier::Structural, s),
        obs("nijenhuis-skew", "AHskew", Tier::Derived, sk.obstruction_residual),
        obs("characteristic-nabla-g", "AHskew", Tier::Derived, sk.nabla_g_residual),
        obs("characteristic-nabla-f", "AHskew", Tier::Derived, sk.nabla_f_residual),
        obs("nearly-kahler", "nk2", Tier::Derived, eq.nearly_kahler_residual),
        obs("skew-condition", "skew1", Tier::Derived, eq.skew_condition_residual),
        obs("df-type", "dfah", Tier::Derived, eq.df_type_residual),
        obs("nijenhuis-df", "dfah", Tier::Derived, eq.nijenhuis_df_residual),
        obs("torsion-quarter-nijenhuis", "nk3", Tier::Derived, eq.torsion_quarter_n_residual),
        obs("connection-nabla-g", "nika", Tier::Derived, eq.nabla_g_residual),
        obs("connection-nabla-f-form", "nika", Tier::Derived, eq.nabla_f_form_residual),
        obs("einstein-metricity", "metein", Tier::Derived, eq.metricity_residual),
    ];
    for (name, value) in sk.extra {
        v.push(info(name, "AHskew", value));
    }
    Ok(v)
}

fn para_hermitian_obs(fr: &PointFrame) -> Result<Vec<Obs>> {
    let s = structures::structure_residual(fr, StructureKind::AlmostParaHermitian)?;
    let sk = structures::para_hermitian_skew_torsion(fr);
    let eq = structures::para_hermitian_ngt_check(fr);
    Ok(vec![
        obs("structure-invariants", "skewah", Tier::Structural, s),
        obs("nijenhuis-skew", "APHskew", Tier::Derived, sk.obstruction_residual),
        obs("characteristic-nabla-g", "APHskew", Tier::Derived, sk.nabla_g_residual),
        obs("characteristic-nabla-f", "APHskew", Tier::Derived, sk.nabla_f_residual),
        obs("nearly-para-kahler", "ngtskewp", Tier::Derived, eq.nearly_para_kahler_residual),
        obs("skew-condition", "skew1", Tier::Derived, eq.skew_condition_residual),
        obs("einstein-metricity", "metein", Tier::Derived, eq.metricity_residual),
        obs("connection-nabla-g", "ngtskewp", Tier::Derived, eq.nabla_g_residual),
    ])
}

fn contact_obs(fr: &PointFrame) -> Result<Vec<Obs>> {
    let s = structures::structure_residual(fr, StructureKind::AlmostContact)?;
    let sk = structures::contact_skew_torsion(fr)?;
    let p = structures::contact_ngt_pipeline(fr)?;
    let mut v = vec![
        obs("structure-invariants", "acon", Tier::Structural, s),
        obs("nijenhuis-ac-skew", "AcHskew", Tier::Derived, sk.obstruction_residual),
        obs("characteristic-nabla-g", "tac", Tier::Derived, sk.nabla_g_residual),
        obs("characteristic-nabla-f", "tac", Tier::Derived, sk.nabla_f_residual),
    ];
    for (name, value) in &sk.extra {
        let anchor = if *name == "deta-interior-torsion" { "aconeta" } else { "kill" };
        v.push(obs(
            match *name {
                "xi-killing" => "xi-killing",
                "nabla-eta" => "characteristic-nabla-eta",
                "nabla-xi" => "characteristic-nabla-xi",
                _ => "deta-interior-torsion",
            },
            anchor,
            Tier::Derived,
            *value,
        ));
    }
    v.push(info(
        "compact-torsion-form",
        "tac1",
        structures::contact_compact_torsion_residual(fr)?,
    ));
    v.extend([
        obs("almost-nearly-cosymplectic", "ff3f", Tier::Derived, p.cosymplectic_residual),
        obs("torsion-double-formula", "acnika", Tier::Derived, p.torsion_double_residual),
        obs("connection-form", "acnika", Tier::Derived, p.connection_residual),
        obs("connection-nabla-g-form", "acnika", Tier::Derived, p.nabla_g_form_residual),
        obs("connection-nabla-f-form", "acnika", Tier::Derived, p.nabla_f_form_residual),
        obs("einstein-metricity", "metein", Tier::Derived, p.metricity_residual),
        obs("deta-identities", "xi1", Tier::Derived, p.deta_identities_residual),
        obs("df-xi-contraction", "dfdet", Tier::Derived, p.df_contraction_residual),
        obs("eta-derivative", "kill1", Tier::Derived, p.eta_derivative_residual),
        obs("nijenhuis-xi", "nijxi", Tier::Derived, p.nijenhuis_xi_residual),
        obs("nijenhuis-wedge", "skewacB2", Tier::Derived, p.nijenhuis_wedge_residual),
        obs("df-eta-relation", "finac1", Tier::Derived, p.df_eta_relation_residual),
        obs("derivative-of-a", "Blair", Tier::Derived, p.blair_lemma_residual),
        obs("lie-derivative-f", "lieF", Tier::Derived, p.lie_derivative_residual),
    ]);
    Ok(v)
}

fn paracontact_obs(fr: &PointFrame) -> Result<Vec<Obs>> {
    let s = structures::structure_residual(fr, StructureKind::AlmostParaContact)?;
    let sk = structures::paracontact_skew_torsion(fr)?;
    let p = structures::paracontact_ngt_pipeline(fr)?;
    let mut v = vec![
        obs("structure-invariants", "apcon", Tier::Structural, s),
        obs("nijenhuis-apc-skew", "AcHskewp", Tier::Derived, sk.obstruction_residual),
        obs("characteristic-nabla-g", "AcHskewp", Tier::Derived, sk.nabla_g_residual),
        obs("characteristic-nabla-f", "AcHskewp", Tier::Derived, sk.nabla_f_residual),
    ];
    for (name, value) in &sk.extra {
        if *name == "xi-killing" {
            v.push(obs("xi-killing", "kill", Tier::Derived, *value));
        }
    }
    v.extend([
        obs("ngt-condition", "acnikap", Tier::Derived, p.condition_residual),
        obs("eta-identities", "xi1AP", Tier::Derived, p.eta_identities_residual),
        obs("nijenhuis-form", "skew1AP", Tier::Derived, p.nijenhuis_form_residual),
        obs("nijenhuis-slot", "ZamkAP", Tier::Derived, p.nijenhuis_slot_residual),
        obs("nijenhuis-xi", "ZamkAP", Tier::Derived, p.nijenhuis_xi_residual),
        obs("nijenhuis-endo", "NAAA", Tier::Derived, p.nijenhuis_aaa_residual),
        obs("einstein-metricity", "metein", Tier::Derived, p.metricity_residual),
        obs("connection-nabla-g-form", "acnikap", Tier::Derived, p.nabla_g_form_residual),
        obs("connection-nabla-f-form", "acnikap", Tier::Derived, p.nabla_f_form_residual),
    ]);
    Ok(v)
}

/// Rejection threshold: residuals at or above it are definite failures.
pub const FAIL_THRESHOLD: f64 = 1e-3;
/// Structural invariants must hold to this tolerance.
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Derived identities, exact-derivative backends.
pub const DERIVED_TOL_EXACT: f64 = 1e-8;
/// Derived identities, finite-difference backends.
pub const DERIVED_TOL_FD: f64 = 1e-4;

/// Runs a suite over `points` deterministically sampled points.
/// `auto` resolves the suite by structure classification. A point
/// whose evaluation errors is skipped and counted. `tol` overrides the
/// derived-identity pass tolerance.
pub fn run_checks(
    m: &Manifold,
    suite: Suite,
    points: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    if points == 0 {
        return Err(Error::Precondition("need at least one sample point".into()));
    }
    let pts = sampling::sample_points(&m.chart().sample_box(), points, seed);
    let mut frames = Vec::new();
    let mut skipped = 0usize;
    for p in &pts {
        match m.frame(p) {
            Ok(fr) => frames.push(fr),
            Err(_) => skipped += 1,
        }
    }
    if frames.is_empty() {
        return Err(Error::Precondition("every sampled point failed to evaluate".into()));
    }

    let resolved = match suite {
        Suite::Auto => match structures::classify(&frames)? {
            StructureKind::AlmostHermitian => Suite::Hermitian,
            StructureKind::AlmostParaHermitian => Suite::ParaHermitian,
            StructureKind::AlmostContact => Suite::Contact,
            StructureKind::AlmostParaContact => Suite::Paracontact,
            StructureKind::Generic => Suite::Generic,
        },
        s => s,
    };

    let derived_tol = tol.unwrap_or(if m.metric.is_exact() {
        DERIVED_TOL_EXACT
    } else {
        DERIVED_TOL_FD
    });

    // name -> (anchor, tier, informational, max residual over points)
    let mut acc: Vec<Obs> = Vec::new();
    for fr in &frames {
        let res = match resolved {
            Suite::Generic => generic_obs(fr),
            Suite::Hermitian => hermitian_obs(fr),
            Suite::ParaHermitian => para_hermitian_obs(fr),
            Suite::Contact => contact_obs(fr),
            Suite::Paracontact => paracontact_obs(fr),
            Suite::Ngt => Ok(ngt_obs(fr)),
            Suite::Eisenhart => Ok(eisenhart_obs(fr)),
            Suite::Auto => unreachable!(),
        };
        let point_obs = match res {
            Ok(o) => o,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        if acc.is_empty() {
            acc = point_obs;
        } else {
            for (slot, o) in acc.iter_mut().zip(point_obs) {
                debug_assert_eq!(slot.name, o.name);
                slot.value = slot.value.max(o.value);
            }
        }
    }
    if acc.is_empty() {
        return Err(Error::Precondition("every sampled point failed to evaluate".into()));
    }

    let mut checks: Vec<CheckRecord> = acc
        .into_iter()
        .map(|o| {
            let tolerance = match o.tier {
                Tier::Structural => STRUCTURAL_TOL,
                Tier::Derived => derived_tol,
            };
            let verdict = if o.informational {
                Verdict::Indeterminate
            } else if o.value <= tolerance {
                Verdict::Pass
            } else if o.value >= FAIL_THRESHOLD {
                Verdict::Fail
            } else {
                Verdict::Indeterminate
            };
            CheckRecord {
                name: o.name.to_string(),
                anchor: o.anchor.to_string(),
                max_residual: o.value,
                tolerance,
                verdict,
                informational: o.informational,
            }
        })
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));

    Ok(CheckReport {
        manifold: m.name.clone(),
        suite: resolved.name().to_string(),
        seed,
        points,
        skipped_points: skipped,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::builtin;

    #[test]
    fn s6_auto_resolves_hermitian_and_passes() {
        let m = builtin("s6-nearly-kahler").unwrap();
        let rep = run_checks(&m, Suite::Auto, 8, 42, None).unwrap();
        assert_eq!(rep.suite, "hermitian");
        assert!(rep.all_pass(), "{}", rep.render_table());
        assert_eq!(rep.skipped_points, 0);
    }

    #[test]
    fn contact_r3_records_cosymplectic_failure() {
        let m = builtin("contact-r3").unwrap();
        let rep = run_checks(&m, Suite::Auto, 8, 42, None).unwrap();
        assert_eq!(rep.suite, "contact");
        assert!(!rep.all_pass());
        let ff3f = rep.checks.iter().find(|c| c.anchor == "ff3f").unwrap();
        assert_eq!(ff3f.verdict, Verdict::Fail);
        assert!(ff3f.max_residual >= 1e-2);
    }

    #[test]
    fn deterministic_json() {
        let m = builtin("nk-times-line").unwrap();
        let a = run_checks(&m, Suite::Contact, 4, 7, None).unwrap().to_json();
        let b = run_checks(&m, Suite::Contact, 4, 7, None).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wall"));
    }

    #[test]
    fn ngt_suite_on_flat_kahler_trivial() {
        let m = builtin("flat-kahler-4").unwrap();
        let rep = run_checks(&m, Suite::Ngt, 3, 1, None).unwrap();
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn eisenhart_suite_on_deformed_hermitian() {
        let m = builtin("deformed-hermitian-r4").unwrap();
        let rep = run_checks(&m, Suite::Eisenhart, 5, 3, None).unwrap();
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn checks_sorted_by_name_and_anchors_nonempty() {
        let m = builtin("para-product-line").unwrap();
        let rep = run_checks(&m, Suite::Auto, 4, 11, None).unwrap();
        assert_eq!(rep.suite, "paracontact");
        for w in rep.checks.windows(2) {
            assert!(w[0].name <= w[1].name);
        }
        for c in &rep.checks {
            assert!(!c.anchor.is_empty());
        }
        assert!(rep.all_pass(), "{}", rep.render_table());
    }
}
