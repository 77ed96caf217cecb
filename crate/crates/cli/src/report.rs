//! Classification reports and the invariant battery, in both human-readable
//! and JSON form.

use std::fmt::Write as _;

use hqds_core::algebra::{annihilator, find_idempotents_numeric, nilpotent_grid_points, squared_subalgebra, NewtonSettings};
use hqds_core::catalog::LocusSignature;
use hqds_core::classify::{Classification, ClassificationResult, NoteKind, Verdict};
use hqds_core::derivation::derivation_algebra;
use hqds_core::linalg::{Matrix3, Vector3};
use hqds_core::scalar::{format_rational, Rational, Scalar};
use hqds_core::tensor::StructureTensor;
use serde::Serialize;

use crate::document::FORMAT_VERSION;

/// Radius of the integer grid scanned for nilpotent elements.
const NILPOTENT_GRID_RADIUS: i64 = 2;

/// Idempotents listed in the text report; the JSON report carries all of them.
const IDEMPOTENTS_SHOWN: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdempotentFinding {
    pub point: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 3]>,
    pub local_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocusReport {
    pub isolated: usize,
    pub curve_points: bool,
    pub surface_points: bool,
}

impl From<LocusSignature> for LocusReport {
    fn from(s: LocusSignature) -> Self {
        LocusReport { isolated: s.isolated, curve_points: s.curve_points, surface_points: s.surface_points }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantBattery {
    pub dim_der: usize,
    pub dim_ann: usize,
    pub ann_basis: Vec<[String; 3]>,
    pub dim_square: usize,
    pub square_basis: Vec<[String; 3]>,
    pub idempotents: Vec<IdempotentFinding>,
    pub idempotent_locus: LocusReport,
    pub nilpotent_grid_points: usize,
}

fn render_vec(v: &Vector3<Rational>) -> [String; 3] {
    std::array::from_fn(|i| format_rational(&v[i]))
}

fn render_matrix<S: Scalar>(m: &Matrix3<S>) -> [[String; 3]; 3] {
    std::array::from_fn(|r| std::array::from_fn(|c| m.get(r, c).render()))
}

impl InvariantBattery {
    pub fn compute(t: &StructureTensor) -> Self {
        let ann = annihilator(t);
        let square = squared_subalgebra(t);
        let found = find_idempotents_numeric(t, &NewtonSettings::default());
        let locus = LocusSignature::from_local_dims(found.iter().map(|f| f.local_dim));
        InvariantBattery {
            dim_der: derivation_algebra(t).dimension(),
            dim_ann: ann.dim(),
            ann_basis: ann.basis().iter().map(render_vec).collect(),
            dim_square: square.dim(),
            square_basis: square.basis().iter().map(render_vec).collect(),
            idempotents: found
                .iter()
                .map(|f| IdempotentFinding { point: f.point, exact: f.exact.as_ref().map(render_vec), local_dim: f.local_dim })
                .collect(),
            idempotent_locus: locus.into(),
            nilpotent_grid_points: nilpotent_grid_points(t, NILPOTENT_GRID_RADIUS).len(),
        }
    }

    pub fn render_text(&self, out: &mut String) {
        let span = |b: &[[String; 3]]| {
            if b.is_empty() {
                "0".to_string()
            } else {
                b.iter().map(|v| format!("({})", v.join(", "))).collect::<Vec<_>>().join(", ")
            }
        };
        writeln!(out, "dim Der A = {}", self.dim_der).unwrap();
        writeln!(out, "Ann A: dim {} spanned by {}", self.dim_ann, span(&self.ann_basis)).unwrap();
        writeln!(out, "A^2: dim {} spanned by {}", self.dim_square, span(&self.square_basis)).unwrap();
        let l = &self.idempotent_locus;
        writeln!(
            out,
            "idempotents: {} found ({} isolated, curve points: {}, surface points: {})",
            self.idempotents.len(),
            l.isolated,
            yes_no(l.curve_points),
            yes_no(l.surface_points)
        )
        .unwrap();
        for f in self.idempotents.iter().take(IDEMPOTENTS_SHOWN) {
            match &f.exact {
                Some(e) => writeln!(out, "  ({}) local dim {}", e.join(", "), f.local_dim).unwrap(),
                None => writeln!(
                    out,
                    "  ({:.12}, {:.12}, {:.12}) local dim {}",
                    f.point[0], f.point[1], f.point[2], f.local_dim
                )
                .unwrap(),
            }
        }
        if self.idempotents.len() > IDEMPOTENTS_SHOWN {
            writeln!(out, "  ... {} more in the JSON report", self.idempotents.len() - IDEMPOTENTS_SHOWN).unwrap();
        }
        writeln!(
            out,
            "nilpotent points on the integer grid [-{r}, {r}]^3: {}",
            self.nilpotent_grid_points,
            r = NILPOTENT_GRID_RADIUS
        )
        .unwrap();
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    /// `family`, `null_algebra` or `not_classifiable`.
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    /// Columns are the canonical basis vectors in input coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<[[String; 3]; 3]>,
    /// Inverse of `basis`: maps input coordinates to canonical ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[[String; 3]; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerdictReport {
    fn empty(kind: &'static str) -> Self {
        VerdictReport {
            kind,
            family: None,
            table: None,
            params: Vec::new(),
            omega: None,
            basis: None,
            witness: None,
            residual: None,
            reason: None,
            detail: None,
        }
    }

    fn family<S: Scalar>(c: &Classification<S>) -> Self {
        VerdictReport {
            family: Some(c.label.name()),
            table: Some(c.label.table.to_string()),
            params: c.label.params.iter().map(|p| p.render()).collect(),
            omega: Some(c.omega().render()),
            basis: Some(render_matrix(&c.basis)),
            witness: Some(render_matrix(&c.witness)),
            residual: Some(c.residual),
            ..Self::empty("family")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub format_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mode: String,
    pub verdict: VerdictReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    pub invariants: InvariantBattery,
    pub discrepancies: Vec<Discrepancy>,
    pub route: Vec<String>,
}

fn note_kind(k: NoteKind) -> &'static str {
    match k {
        NoteKind::PublishedSystemMisprint => "published_system_misprint",
        NoteKind::ProseRouteConflict => "prose_route_conflict",
        NoteKind::OutsidePublishedRange => "outside_published_range",
    }
}

impl ClassificationReport {
    pub fn build(t: &StructureTensor, result: &ClassificationResult) -> Self {
        let verdict = match &result.verdict {
            Verdict::Exact(c) => VerdictReport::family(c),
            Verdict::Numeric(c) => VerdictReport::family(c),
            Verdict::NullAlgebra => VerdictReport::empty("null_algebra"),
            Verdict::NotClassifiable(u) => VerdictReport {
                reason: Some(u.reason.to_string()),
                detail: Some(u.detail.clone()),
                omega: u.omega.map(|w| w.to_string()),
                ..VerdictReport::empty("not_classifiable")
            },
        };
        ClassificationReport {
            format_version: FORMAT_VERSION,
            source: None,
            name: None,
            mode: result.mode().to_string(),
            verdict,
            expected_family: None,
            matches_expected: None,
            invariants: InvariantBattery::compute(t),
            discrepancies: result
                .notes
                .iter()
                .map(|n| Discrepancy { kind: note_kind(n.kind), message: n.message.clone() })
                .collect(),
            route: result.route.clone(),
        }
    }

    /// Records the family a document claims and whether the verdict agrees.
    pub fn with_expectation(mut self, expected: Option<String>) -> Self {
        if let Some(e) = expected {
            let got = match self.verdict.kind {
                "family" => self.verdict.family.clone(),
                "null_algebra" => Some("null".to_string()),
                _ => None,
            };
            self.matches_expected = Some(got.as_deref() == Some(e.as_str()));
            self.expected_family = Some(e);
        }
        self
    }

    pub fn is_definite(&self) -> bool {
        self.verdict.kind != "not_classifiable"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.source {
            writeln!(out, "== {s} ==").unwrap();
        }
        if let Some(n) = &self.name {
            writeln!(out, "name: {n}").unwrap();
        }
        let v = &self.verdict;
        match v.kind {
            "family" => {
                let fam = v.family.as_deref().unwrap_or("?");
                if v.params.is_empty() {
                    writeln!(out, "verdict: {fam}").unwrap();
                } else {
                    writeln!(out, "verdict: {fam}({})", v.params.join(", ")).unwrap();
                }
                writeln!(out, "table: {}", v.table.as_deref().unwrap_or("?")).unwrap();
            }
            "null_algebra" => writeln!(out, "verdict: null algebra").unwrap(),
            _ => writeln!(out, "verdict: not classifiable ({})", v.reason.as_deref().unwrap_or("")).unwrap(),
        }
        writeln!(out, "mode: {}", self.mode).unwrap();
        if let Some(w) = &v.omega {
            writeln!(out, "omega: {w}").unwrap();
        }
        if let Some(d) = &v.detail {
            writeln!(out, "detail: {d}").unwrap();
        }
        if let (Some(e), Some(m)) = (&self.expected_family, self.matches_expected) {
            writeln!(out, "expected family: {e} ({})", if m { "matches" } else { "MISMATCH" }).unwrap();
        }
        if let Some(w) = &v.witness {
            writeln!(out, "witness (input coordinates -> canonical coordinates):").unwrap();
            for row in w {
                writeln!(out, "  [{}]", row.join(", ")).unwrap();
            }
        }
        if let Some(r) = v.residual {
            if self.mode != "exact" {
                writeln!(out, "residual: {r:e}").unwrap();
            }
        }
        writeln!(out, "invariants:").unwrap();
        let mut inv = String::new();
        self.invariants.render_text(&mut inv);
        for line in inv.lines() {
            writeln!(out, "  {line}").unwrap();
        }
        if !self.discrepancies.is_empty() {
            writeln!(out, "discrepancies with the published classification:").unwrap();
            for d in &self.discrepancies {
                writeln!(out, "  - [{}] {}", d.kind, d.message).unwrap();
            }
        }
        writeln!(out, "route:").unwrap();
        for step in &self.route {
            writeln!(out, "  - {step}").unwrap();
        }
        out
    }
}
