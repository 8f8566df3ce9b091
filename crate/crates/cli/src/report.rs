//! Report payloads. Field order is fixed by the struct declarations and
//! every collection is a vector, so serialization is byte-deterministic.

use num::BigRational;
use serde::Serialize;

use tlg_core::constructions::{
    BhDualResult, GiventalPresentation, HvPresentation, SemigroupVerdict,
};
use tlg_core::json::{
    fmt_rat, int_vec_to_strings, lifts_to_dto, matrix_to_rows, rat_vec_to_strings, LgModelDto,
    LiftEntryDto, VRepDto,
};
use tlg_core::lineardata::{ComplexLift, KopaseticReport, MonRowTag, RegularityReport};
use tlg_core::polyhedra::{Polyhedron, RowFate};
use tlg_core::structure::{BundleReport, SectionOutcome};
use tlg_core::Result;

/// 15-significant-digit approximations of `exp(2 pi i lift)` coefficients.
pub fn numeric_coefficients(lifts: &[ComplexLift]) -> Vec<[String; 2]> {
    lifts
        .iter()
        .map(|l| {
            let (re, im) = l.coefficient_approx();
            [format!("{re:.14e}"), format!("{im:.14e}")]
        })
        .collect()
}

#[derive(Serialize)]
pub struct KopaseticDto {
    pub verdict: bool,
    pub interior_witness: Option<Vec<String>>,
    /// 1-based indices of facet rows.
    pub facet_rows: Vec<usize>,
    /// Per original row (1-based positions): the surviving row it maps to,
    /// or 0 when the selection sends it to zero.
    pub k_row_map: Vec<usize>,
    pub primitivity_failures: Vec<usize>,
    pub failure: Option<String>,
}

impl KopaseticDto {
    pub fn from_report(r: &KopaseticReport) -> Self {
        KopaseticDto {
            verdict: r.verdict,
            interior_witness: r.interior_witness.as_ref().map(|w| rat_vec_to_strings(w)),
            facet_rows: r.facet_indices.iter().map(|i| i + 1).collect(),
            k_row_map: r
                .k_row_map
                .iter()
                .map(|m| m.map(|i| i + 1).unwrap_or(0))
                .collect(),
            primitivity_failures: r.primitivity_failures.iter().map(|i| i + 1).collect(),
            failure: r.failure.as_ref().map(|_| r.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct RegularityDto {
    pub ok: bool,
    /// `(divisor row, term row, entry)` for each negative entry, 1-based.
    pub offending: Vec<(usize, usize, String)>,
}

impl RegularityDto {
    pub fn from_report(r: &RegularityReport) -> Self {
        RegularityDto {
            ok: r.ok,
            offending: r
                .offending
                .iter()
                .map(|(i, j, v)| (i + 1, j + 1, v.to_string()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckReport {
    pub command: String,
    pub a_side: KopaseticDto,
    pub b_side: KopaseticDto,
    pub regularity: RegularityDto,
    pub pair_kopasetic: bool,
    pub dual_pair_kopasetic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_b_coefficients: Option<Vec<[String; 2]>>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct DualizeReport {
    pub command: String,
    pub k_row_map: Vec<usize>,
    pub facet_rows: Vec<usize>,
    pub pushed_lift: Vec<LiftEntryDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_pushed_coefficients: Option<Vec<[String; 2]>>,
    pub model: tlg_core::json::ModelFile,
}

#[derive(Serialize)]
pub struct TagDto {
    pub summand: usize,
    pub point: Vec<String>,
}

impl TagDto {
    pub fn from_tag(t: &MonRowTag) -> Self {
        TagDto { summand: t.bundle_index + 1, point: int_vec_to_strings(&t.point) }
    }
}

#[derive(Serialize)]
pub struct YPrimeDto {
    pub div: Vec<Vec<String>>,
    pub ray_names: Vec<String>,
    pub k_row_map: Vec<usize>,
    pub facet_rows: Vec<usize>,
    pub pushed_divisors: Vec<Vec<String>>,
    pub pushed_lift: Vec<String>,
    pub polytope_facets: Vec<FacetDto>,
    pub polytope_reflexive: Option<bool>,
}

#[derive(Serialize)]
pub struct FacetDto {
    pub normal: Vec<String>,
    pub offset: String,
}

pub fn canonical_facets(poly: &Polyhedron) -> Result<Vec<FacetDto>> {
    Ok(poly
        .canonical_facet_form()?
        .into_iter()
        .map(|(normal, offset)| FacetDto {
            normal: int_vec_to_strings(&normal),
            offset: fmt_rat(&offset),
        })
        .collect())
}

#[derive(Serialize)]
pub struct VjDto {
    pub summand: usize,
    pub nonzero_vertices: Vec<TagDto>,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub command: String,
    pub pair_kopasetic: bool,
    pub alpha_prime: Vec<String>,
    pub dual_a_matrix: Vec<Vec<String>>,
    pub xprime_facet_rows: Vec<usize>,
    pub xprime_pushed_lift: Vec<String>,
    pub d_prime: Vec<Vec<String>>,
    pub d_prime_divisors: Vec<Vec<String>>,
    pub yprime: YPrimeDto,
    pub is_bundle: bool,
    pub failing_elements: Vec<TagDto>,
    pub anomalies: Vec<String>,
    pub local_calabi_yau: [bool; 2],
    pub vj: Option<Vec<VjDto>>,
    pub section: String,
    pub section_witness: Option<Vec<Vec<String>>>,
    /// 1-based B-side rows the double dual deletes.
    pub double_dual_deleted_rows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub yprime_svg: Option<String>,
    pub warnings: Vec<String>,
    pub conventions: Vec<String>,
}

pub fn section_outcome_str(s: &SectionOutcome) -> String {
    match s {
        SectionOutcome::Found(_) => "found".into(),
        SectionOutcome::Absent => "absent".into(),
        SectionOutcome::Truncated => "truncated".into(),
    }
}

pub fn bundle_vj_dto(report: &BundleReport, tags: &[MonRowTag]) -> Option<Vec<VjDto>> {
    report.vj.as_ref().map(|vj| {
        vj.iter()
            .map(|set| VjDto {
                summand: set.bundle_index + 1,
                nonzero_vertices: set
                    .v_cross
                    .iter()
                    .map(|(idx, _)| TagDto::from_tag(&tags[*idx]))
                    .collect(),
            })
            .collect()
    })
}

#[derive(Serialize)]
pub struct NefVerdictDto {
    pub givental: bool,
    pub calabi_yau: bool,
    pub parts_nonempty: bool,
    pub vertex_condition: bool,
    pub valid: bool,
    pub reasons: Vec<String>,
}

#[derive(Serialize)]
pub struct BbReport {
    pub command: String,
    pub verdict: NefVerdictDto,
    pub phi_kronecker: bool,
    pub pstar_polar_facets: Vec<FacetDto>,
    pub pstar_facets: Vec<FacetDto>,
    pub estar: Vec<Vec<Vec<String>>>,
    pub ystar_div: Vec<Vec<String>>,
    pub dstar: Vec<Vec<String>>,
    pub yprime: YPrimeDto,
    pub yprime_matches_pstar: bool,
    pub pushed_divisors_match: bool,
    pub is_bundle: bool,
    pub dual_section_found: bool,
    pub all_checks_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pstar_svg: Option<String>,
    pub warnings: Vec<String>,
    pub conventions: Vec<String>,
}

#[derive(Serialize)]
pub struct BhReport {
    pub command: String,
    pub weights: Vec<String>,
    pub degree: String,
    pub exponents: Vec<Vec<String>>,
    pub dual_weights: Vec<String>,
    pub dual_degree: String,
    pub dual_exponents: Vec<Vec<String>>,
    pub kernel_generator: Vec<String>,
    pub factorization_checked: bool,
}

impl BhReport {
    pub fn build(command: String, input: &tlg_core::constructions::BHData, res: &BhDualResult) -> Self {
        BhReport {
            command,
            weights: int_vec_to_strings(&input.weights),
            degree: input.degree.to_string(),
            exponents: matrix_to_rows(&input.exponents),
            dual_weights: int_vec_to_strings(&res.dual.weights),
            dual_degree: res.dual.degree.to_string(),
            dual_exponents: matrix_to_rows(&res.dual.exponents),
            kernel_generator: int_vec_to_strings(&res.kernel_generator),
            factorization_checked: res.factorization_checked,
        }
    }
}

#[derive(Serialize)]
pub struct RelationDto {
    pub weights: Vec<String>,
    pub degrees: Vec<String>,
    pub rendered: String,
}

#[derive(Serialize)]
pub struct GiventalReport {
    pub command: String,
    pub num_base_vars: usize,
    pub num_fiber_vars: usize,
    pub relations: Vec<RelationDto>,
    pub superpotential: String,
    pub variable_map: Vec<String>,
    pub qhat_exponents: Vec<Vec<String>>,
    pub variable_characters: Vec<Vec<String>>,
    pub hv_weight_matrix: Vec<Vec<String>>,
    pub hv_degree_matrix: Vec<Vec<String>>,
    pub hv_certificate: bool,
    pub hv_parameter_sign: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupDto>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct SemigroupDto {
    pub bound: i64,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_checked: Option<usize>,
}

impl SemigroupDto {
    pub fn build(bound: i64, v: &SemigroupVerdict) -> Self {
        match v {
            SemigroupVerdict::Generated { points_checked } => SemigroupDto {
                bound,
                verdict: "generated".into(),
                counterexample: None,
                points_checked: Some(*points_checked),
            },
            SemigroupVerdict::Counterexample(p) => SemigroupDto {
                bound,
                verdict: "counterexample".into(),
                counterexample: Some(int_vec_to_strings(p)),
                points_checked: None,
            },
            SemigroupVerdict::NoPositiveFunctional => SemigroupDto {
                bound,
                verdict: "no-positive-functional".into(),
                counterexample: None,
                points_checked: None,
            },
        }
    }
}

pub fn givental_report(
    command: String,
    pres: &GiventalPresentation,
    hv: &HvPresentation,
    semigroup: Option<SemigroupDto>,
    warnings: Vec<String>,
) -> GiventalReport {
    let relations = (0..pres.relation_weights.rows())
        .map(|i| RelationDto {
            weights: int_vec_to_strings(&pres.relation_weights.row(i)),
            degrees: int_vec_to_strings(&pres.relation_degrees.row(i)),
            rendered: pres.relation_strings()[i].clone(),
        })
        .collect();
    GiventalReport {
        command,
        num_base_vars: pres.num_base_vars,
        num_fiber_vars: pres.num_fiber_vars,
        relations,
        superpotential: pres.superpotential_string(),
        variable_map: pres.variable_map_strings(),
        qhat_exponents: matrix_to_rows(&pres.qhat_exponents),
        variable_characters: matrix_to_rows(&pres.variable_characters),
        hv_weight_matrix: matrix_to_rows(&hv.weight_matrix),
        hv_degree_matrix: matrix_to_rows(&hv.degree_matrix),
        hv_certificate: true,
        hv_parameter_sign: "frak_t_i = -t_i".into(),
        semigroup,
        warnings,
    }
}

#[derive(Serialize)]
pub struct PolyReport {
    pub command: String,
    pub ambient_dim: usize,
    pub feasible: bool,
    pub interior_point: Option<Vec<String>>,
    pub facet_rows: Option<Vec<usize>>,
    pub row_map: Option<Vec<String>>,
    pub canonical_facets: Option<Vec<FacetDto>>,
    pub vrep: VRepDto,
    pub bounded: bool,
    pub lattice_points: Option<Vec<Vec<String>>>,
    pub reflexive: Option<bool>,
    pub polar_points: Option<Vec<Vec<String>>>,
    pub warnings: Vec<String>,
}

pub fn row_map_strings(fates: &[RowFate]) -> Vec<String> {
    fates
        .iter()
        .map(|f| match f {
            RowFate::Facet => "facet".to_string(),
            RowFate::DuplicateOf(i) => format!("duplicate-of-{}", i + 1),
            RowFate::Redundant => "redundant".to_string(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct SigmaReport {
    pub command: String,
    pub model: tlg_core::json::ModelFile,
}

pub fn lift_entries(lifts: &[ComplexLift]) -> Vec<LiftEntryDto> {
    lifts_to_dto(lifts)
}

pub fn rat_strings(v: &[BigRational]) -> Vec<String> {
    rat_vec_to_strings(v)
}

pub fn model_dto(model: &tlg_core::lineardata::ToricLGModel) -> LgModelDto {
    LgModelDto::from_model(model)
}
