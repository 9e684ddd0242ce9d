//! Metabolic network data model, stoichiometric matrix construction, and
//! structural validation.
//!
//! A [`MetabolicModel`] is a plain, immutable description: ordered
//! metabolites, ordered reactions with bounds and sparse stoichiometry, and
//! a [`RoleMap`] naming the reactions tracked by the switch experiments
//! (glucose uptake, oxygen uptake, lactate secretion, biomass). Matrix
//! columns follow reaction order; rows follow the order of non-boundary
//! metabolites.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// A chemical species. Boundary species sit outside the balanced system and
/// contribute no mass-balance row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metabolite {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub boundary: bool,
}

impl Metabolite {
    pub fn new(id: &str, name: &str) -> Self {
        Metabolite {
            id: id.to_string(),
            name: name.to_string(),
            boundary: false,
        }
    }
}

/// A reaction: sparse stoichiometry (negative = consumed, positive =
/// produced) plus box bounds on its flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reaction<S> {
    pub id: String,
    #[serde(default)]
    pub name: String,
    /// Metabolite id -> coefficient. Kept sorted for deterministic output.
    pub stoichiometry: BTreeMap<String, S>,
    pub lower_bound: S,
    pub upper_bound: S,
}

impl<S: Scalar> Reaction<S> {
    pub fn new(
        id: &str,
        name: &str,
        stoichiometry: &[(&str, f64)],
        lower_bound: f64,
        upper_bound: f64,
    ) -> Self {
        Reaction {
            id: id.to_string(),
            name: name.to_string(),
            stoichiometry: stoichiometry
                .iter()
                .map(|(m, c)| (m.to_string(), S::from_f64_lossy(*c)))
                .collect(),
            lower_bound: S::from_f64_lossy(lower_bound),
            upper_bound: S::from_f64_lossy(upper_bound),
        }
    }

    pub fn is_reversible(&self) -> bool {
        self.lower_bound < S::zero() && self.upper_bound > S::zero()
    }
}

/// Whether positive flux through a role reaction means import or export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxOrientation {
    ImportPositive,
    ExportPositive,
}

/// A role reaction together with its sign convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleBinding {
    pub reaction: String,
    pub orientation: FluxOrientation,
}

impl RoleBinding {
    pub fn import(reaction: &str) -> Self {
        RoleBinding {
            reaction: reaction.to_string(),
            orientation: FluxOrientation::ImportPositive,
        }
    }

    pub fn export(reaction: &str) -> Self {
        RoleBinding {
            reaction: reaction.to_string(),
            orientation: FluxOrientation::ExportPositive,
        }
    }
}

/// Names the reactions the sweep and switch machinery needs to find.
///
/// `atp_maintenance` is optional; it only backs the ATP-yield preset
/// objective and models without a maintenance drain simply cannot use that
/// preset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMap {
    pub glucose_uptake: RoleBinding,
    pub oxygen_uptake: RoleBinding,
    pub lactate_secretion: RoleBinding,
    pub biomass: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atp_maintenance: Option<String>,
}

/// An immutable metabolic network. Ordering of the metabolite and reaction
/// lists is significant: it fixes matrix row/column indices and every
/// deterministic output downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetabolicModel<S> {
    pub metabolites: Vec<Metabolite>,
    pub reactions: Vec<Reaction<S>>,
    pub roles: RoleMap,
}

impl<S: Scalar> MetabolicModel<S> {
    pub fn reaction_index(&self, id: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.id == id)
    }

    pub fn metabolite_index(&self, id: &str) -> Option<usize> {
        self.metabolites.iter().position(|m| m.id == id)
    }

    pub fn reaction(&self, id: &str) -> Option<&Reaction<S>> {
        self.reactions.iter().find(|r| r.id == id)
    }

    /// Exchange reactions touch exactly one non-boundary metabolite; they
    /// are the openings that make a steady state attainable.
    pub fn is_exchange(&self, reaction: &Reaction<S>) -> bool {
        let balanced = reaction
            .stoichiometry
            .keys()
            .filter(|m| {
                self.metabolites
                    .iter()
                    .find(|met| &&met.id == m)
                    .map(|met| !met.boundary)
                    .unwrap_or(false)
            })
            .count();
        balanced == 1
    }
}

/// Dense stoichiometric matrix S with one row per non-boundary metabolite
/// and one column per reaction, in model order.
#[derive(Debug, Clone, PartialEq)]
pub struct StoichiometricMatrix<S> {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries; `entries[i * cols + j]` is the coefficient of
    /// balanced metabolite `i` in reaction `j`.
    pub entries: Vec<S>,
    /// Maps each row back to its index in `model.metabolites`.
    pub row_metabolites: Vec<usize>,
}

impl<S: Scalar> StoichiometricMatrix<S> {
    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries[row * self.cols + col]
    }

    /// max_i |(S v)_i|, the mass-balance residual of a flux vector.
    pub fn balance_residual(&self, fluxes: &[S]) -> S {
        assert_eq!(fluxes.len(), self.cols);
        let mut worst = S::zero();
        for i in 0..self.rows {
            let mut acc = S::zero();
            for j in 0..self.cols {
                acc = acc + self.get(i, j) * fluxes[j];
            }
            if acc.abs() > worst {
                worst = acc.abs();
            }
        }
        worst
    }
}

/// Error from matrix construction: a reaction references an unknown species.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("reaction '{reaction}' references unknown metabolite '{metabolite}'")]
pub struct StructuralError {
    pub reaction: String,
    pub metabolite: String,
}

/// Builds the stoichiometric matrix. Boundary metabolites contribute no
/// row; every coefficient lands at (balanced-metabolite row, reaction
/// column). Pure: equal models yield equal matrices.
pub fn build_stoichiometric_matrix<S: Scalar>(
    model: &MetabolicModel<S>,
) -> Result<StoichiometricMatrix<S>, StructuralError> {
    let mut row_of: HashMap<&str, usize> = HashMap::new();
    let mut row_metabolites = Vec::new();
    let mut boundary: HashMap<&str, bool> = HashMap::new();
    for (idx, met) in model.metabolites.iter().enumerate() {
        boundary.insert(met.id.as_str(), met.boundary);
        if !met.boundary {
            row_of.insert(met.id.as_str(), row_metabolites.len());
            row_metabolites.push(idx);
        }
    }

    let rows = row_metabolites.len();
    let cols = model.reactions.len();
    let mut entries = vec![S::zero(); rows * cols];
    for (j, reaction) in model.reactions.iter().enumerate() {
        for (met_id, coeff) in &reaction.stoichiometry {
            match row_of.get(met_id.as_str()) {
                Some(&i) => entries[i * cols + j] = *coeff,
                None if boundary.contains_key(met_id.as_str()) => {} // boundary: no row
                None => {
                    return Err(StructuralError {
                        reaction: reaction.id.clone(),
                        metabolite: met_id.clone(),
                    })
                }
            }
        }
    }

    Ok(StoichiometricMatrix {
        rows,
        cols,
        entries,
        row_metabolites,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// One validation finding: severity, the offending id, and a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn error(subject: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            subject: subject.to_string(),
            message,
        }
    }

    fn warning(subject: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            subject: subject.to_string(),
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.severity, self.subject, self.message)
    }
}

/// Checks every structural invariant and returns the findings; an empty
/// list means the model is sound. Never panics on broken input.
pub fn validate_model<S: Scalar>(model: &MetabolicModel<S>) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut met_ids: HashMap<&str, usize> = HashMap::new();
    for met in &model.metabolites {
        if met.id.is_empty() {
            out.push(Diagnostic::error("<metabolite>", "empty metabolite id".into()));
            continue;
        }
        *met_ids.entry(met.id.as_str()).or_insert(0) += 1;
    }
    for (id, count) in met_ids.iter() {
        if *count > 1 {
            out.push(Diagnostic::error(
                id,
                format!("metabolite id declared {count} times"),
            ));
        }
    }

    let mut rxn_ids: HashMap<&str, usize> = HashMap::new();
    for rxn in &model.reactions {
        if rxn.id.is_empty() {
            out.push(Diagnostic::error("<reaction>", "empty reaction id".into()));
        } else {
            *rxn_ids.entry(rxn.id.as_str()).or_insert(0) += 1;
        }

        if rxn.lower_bound.is_nan() || rxn.upper_bound.is_nan() {
            out.push(Diagnostic::error(&rxn.id, "bound is NaN".into()));
        } else if rxn.lower_bound > rxn.upper_bound {
            out.push(Diagnostic::error(
                &rxn.id,
                format!(
                    "lower bound {} exceeds upper bound {}",
                    rxn.lower_bound, rxn.upper_bound
                ),
            ));
        }

        if rxn.stoichiometry.is_empty() {
            out.push(Diagnostic::error(&rxn.id, "empty stoichiometry".into()));
        }
        for (met_id, coeff) in &rxn.stoichiometry {
            if !met_ids.contains_key(met_id.as_str()) {
                out.push(Diagnostic::error(
                    &rxn.id,
                    format!("references unknown metabolite '{met_id}'"),
                ));
            }
            if !coeff.is_finite() {
                out.push(Diagnostic::error(
                    &rxn.id,
                    format!("non-finite coefficient on '{met_id}'"),
                ));
            } else if *coeff == S::zero() {
                out.push(Diagnostic::error(
                    &rxn.id,
                    format!("zero coefficient on '{met_id}' (drop the entry instead)"),
                ));
            }
        }
    }
    for (id, count) in rxn_ids.iter() {
        if *count > 1 {
            out.push(Diagnostic::error(
                id,
                format!("reaction id declared {count} times"),
            ));
        }
    }

    // Role resolution.
    let resolve = |role: &str, id: &str, out: &mut Vec<Diagnostic>| -> bool {
        if model.reaction_index(id).is_none() {
            out.push(Diagnostic::error(
                id,
                format!("{role} role names a missing reaction"),
            ));
            false
        } else {
            true
        }
    };
    resolve("glucose_uptake", &model.roles.glucose_uptake.reaction, &mut out);
    resolve("oxygen_uptake", &model.roles.oxygen_uptake.reaction, &mut out);
    resolve(
        "lactate_secretion",
        &model.roles.lactate_secretion.reaction,
        &mut out,
    );
    if resolve("biomass", &model.roles.biomass, &mut out) {
        let biomass = model.reaction(&model.roles.biomass).unwrap();
        let precursors = biomass
            .stoichiometry
            .values()
            .filter(|c| **c < S::zero())
            .count();
        if precursors < 2 {
            out.push(Diagnostic::error(
                &model.roles.biomass,
                format!("biomass pseudo-reaction consumes {precursors} precursors, need at least 2"),
            ));
        }
    }
    if let Some(atpm) = &model.roles.atp_maintenance {
        resolve("atp_maintenance", atpm, &mut out);
    }

    // Unused metabolites are suspicious but not fatal.
    for met in &model.metabolites {
        let used = model
            .reactions
            .iter()
            .any(|r| r.stoichiometry.contains_key(&met.id));
        if !used && !met.id.is_empty() {
            out.push(Diagnostic::warning(
                &met.id,
                "metabolite participates in no reaction".into(),
            ));
        }
    }

    out
}

/// True iff `validate_model` reports no error-severity findings.
pub fn is_valid<S: Scalar>(model: &MetabolicModel<S>) -> bool {
    validate_model(model).iter().all(|d| !d.is_error())
}

#[cfg(test)]
pub(crate) mod test_models {
    use super::*;

    /// Roles that all point at the first reactions of a toy model; only
    /// meaningful for tests that never run sweeps.
    pub fn dummy_roles(glc: &str, o2: &str, lac: &str, biomass: &str) -> RoleMap {
        RoleMap {
            glucose_uptake: RoleBinding::import(glc),
            oxygen_uptake: RoleBinding::import(o2),
            lactate_secretion: RoleBinding::export(lac),
            biomass: biomass.to_string(),
            atp_maintenance: None,
        }
    }

    /// `source -> A -> sink` open chain with unit stoichiometry.
    pub fn chain_model(ub: f64) -> MetabolicModel<f64> {
        MetabolicModel {
            metabolites: vec![Metabolite::new("A", "A"), Metabolite::new("B", "B")],
            reactions: vec![
                Reaction::new("R_in", "", &[("A", 1.0)], 0.0, ub),
                Reaction::new("R_mid", "", &[("A", -1.0), ("B", 1.0)], 0.0, ub * 10.0),
                Reaction::new("R_out", "", &[("B", -1.0)], 0.0, ub * 10.0),
            ],
            roles: dummy_roles("R_in", "R_in", "R_out", "R_mid"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_models::*;
    use super::*;

    fn two_exchange_model() -> MetabolicModel<f64> {
        MetabolicModel {
            metabolites: vec![Metabolite::new("A", "species A")],
            reactions: vec![
                Reaction::new("R1", "in", &[("A", 1.0)], 0.0, 10.0),
                Reaction::new("R2", "out", &[("A", -1.0)], 0.0, 10.0),
            ],
            roles: dummy_roles("R1", "R1", "R2", "R2"),
        }
    }

    #[test]
    fn matrix_places_coefficients() {
        let model = two_exchange_model();
        let s = build_stoichiometric_matrix(&model).unwrap();
        assert_eq!((s.rows, s.cols), (1, 2));
        assert_eq!(s.get(0, 0), 1.0);
        assert_eq!(s.get(0, 1), -1.0);
    }

    #[test]
    fn matrix_of_empty_model_is_zero_by_zero() {
        let model: MetabolicModel<f64> = MetabolicModel {
            metabolites: vec![],
            reactions: vec![],
            roles: dummy_roles("", "", "", ""),
        };
        let s = build_stoichiometric_matrix(&model).unwrap();
        assert_eq!((s.rows, s.cols), (0, 0));
        assert!(s.entries.is_empty());
    }

    #[test]
    fn matrix_column_signs_follow_convention() {
        // A -> 2B gives the column (-1, +2)^T.
        let model: MetabolicModel<f64> = MetabolicModel {
            metabolites: vec![Metabolite::new("A", ""), Metabolite::new("B", "")],
            reactions: vec![Reaction::new(
                "R",
                "",
                &[("A", -1.0), ("B", 2.0)],
                0.0,
                1.0,
            )],
            roles: dummy_roles("R", "R", "R", "R"),
        };
        let s = build_stoichiometric_matrix(&model).unwrap();
        assert_eq!(s.get(0, 0), -1.0);
        assert_eq!(s.get(1, 0), 2.0);
    }

    #[test]
    fn boundary_metabolites_have_no_row() {
        let mut model = two_exchange_model();
        model.metabolites.push(Metabolite {
            id: "X".into(),
            name: "external".into(),
            boundary: true,
        });
        model.reactions[0]
            .stoichiometry
            .insert("X".into(), -1.0);
        let s = build_stoichiometric_matrix(&model).unwrap();
        assert_eq!(s.rows, 1);
        assert_eq!(s.row_metabolites, vec![0]);
    }

    #[test]
    fn unresolved_metabolite_is_a_structural_error() {
        let mut model = two_exchange_model();
        model.reactions[1]
            .stoichiometry
            .insert("ghost".into(), 1.0);
        let err = build_stoichiometric_matrix(&model).unwrap_err();
        assert_eq!(err.reaction, "R2");
        assert_eq!(err.metabolite, "ghost");
    }

    #[test]
    fn matrix_build_is_pure() {
        let model = chain_model(10.0);
        let a = build_stoichiometric_matrix(&model).unwrap();
        let b = build_stoichiometric_matrix(&model).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cols, model.reactions.len());
        assert_eq!(
            a.rows,
            model.metabolites.iter().filter(|m| !m.boundary).count()
        );
    }

    #[test]
    fn validator_flags_inverted_bounds() {
        let mut model = two_exchange_model();
        model.reactions[0].lower_bound = 5.0;
        model.reactions[0].upper_bound = 2.0;
        let diags = validate_model(&model);
        let errors: Vec<_> = diags.iter().filter(|d| d.is_error()).collect();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].subject, "R1");
    }

    #[test]
    fn validator_flags_missing_biomass_role() {
        let mut model = two_exchange_model();
        model.roles.biomass = "nope".into();
        let diags = validate_model(&model);
        assert!(diags
            .iter()
            .any(|d| d.is_error() && d.subject == "nope" && d.message.contains("biomass")));
    }

    #[test]
    fn validator_flags_degenerate_and_duplicate_entries() {
        let mut model = two_exchange_model();
        model.reactions[0].stoichiometry.clear(); // degenerate
        model.metabolites.push(Metabolite::new("A", "dup"));
        model
            .reactions
            .push(Reaction::new("R2", "dup", &[("A", 1.0)], 0.0, 1.0));
        let diags = validate_model(&model);
        assert!(diags
            .iter()
            .any(|d| d.subject == "R1" && d.message.contains("empty stoichiometry")));
        assert!(diags.iter().any(|d| d.subject == "A" && d.is_error()));
        assert!(diags.iter().any(|d| d.subject == "R2" && d.is_error()));
    }

    #[test]
    fn validator_flags_zero_and_nonfinite_coefficients() {
        let mut model = two_exchange_model();
        model.reactions[0].stoichiometry.insert("A".into(), 0.0);
        model
            .reactions[1]
            .stoichiometry
            .insert("A".into(), f64::INFINITY);
        let diags = validate_model(&model);
        assert!(diags.iter().any(|d| d.message.contains("zero coefficient")));
        assert!(diags
            .iter()
            .any(|d| d.message.contains("non-finite coefficient")));
    }

    #[test]
    fn validator_requires_two_biomass_precursors() {
        let mut model = two_exchange_model();
        model.roles.biomass = "R2".into(); // consumes only A
        let diags = validate_model(&model);
        assert!(diags
            .iter()
            .any(|d| d.is_error() && d.message.contains("precursors")));
    }

    #[test]
    fn chain_model_is_valid() {
        // The chain's dummy biomass consumes one precursor; swap in a
        // two-precursor pseudo-reaction to get a fully valid toy.
        let mut model = chain_model(10.0);
        model.reactions.push(Reaction::new(
            "R_bio",
            "biomass",
            &[("A", -1.0), ("B", -1.0)],
            0.0,
            10.0,
        ));
        model.roles.biomass = "R_bio".into();
        assert!(is_valid(&model));
        assert!(validate_model(&model).is_empty());
    }
}
