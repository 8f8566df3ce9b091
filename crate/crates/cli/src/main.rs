//! `tlg` — duality for toric Landau-Ginzburg models on the command line.
//!
//! Subcommands: check, dualize, analyze, sigma, bb, bh, givental, poly,
//! plot. Input and output are JSON model files with exact ("p/q") numbers;
//! plot emits SVG. Exit codes: 0 = ran (verdicts may be negative),
//! 2 = input error, 3 = a theorem-level identity failed.

mod report;
mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num::BigRational;

use tlg_core::constructions::{
    bb_mirror_via_duality, bh_dual, givental_presentation, hv_presentation, phi_check,
    semigroup_generation_check, BHData, NefData,
};
use tlg_core::json::{
    self, parse_matrix, parse_rat, LgModelDto, ModelFile, ModelPayload, SectionDto, VRepDto,
};
use tlg_core::lineardata::{
    dualize, kopasetic_check, pair_kopasetic, regularity_check, ComplexLift, ToricLGModel,
};
use tlg_core::polyhedra::Polyhedron;
use tlg_core::sigma::{build_lg, build_lg_with_div_override, SectionSpec, SigmaInput};
use tlg_core::structure::{
    analyze_bundle, double_dual_diff, extract_blocks, normalized_alpha_prime,
};
use tlg_core::Error;

#[derive(Parser)]
#[command(
    name = "tlg",
    version,
    about = "Exact duality for toric Landau-Ginzburg models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonIo {
    /// Input model file (JSON).
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Pretty-print the JSON report.
    #[arg(long)]
    pretty: bool,
    /// Add 15-digit numeric approximations next to exact lifts.
    #[arg(long)]
    numeric: bool,
    /// Section override for sigma inputs: "generic" or a path to a JSON
    /// file with {"terms": [...]}.
    #[arg(long)]
    section: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Kopasetic and regularity checks on both sides of a model.
    Check(CommonIo),
    /// Swap the two sides; fails if the dual geometry side is inadmissible.
    Dualize {
        #[command(flatten)]
        io: CommonIo,
        /// Override Im(K') as comma-separated rationals, one per B row.
        #[arg(long)]
        alpha_prime: Option<String>,
    },
    /// Dualize and analyze: blocks, Y', the bundle criterion, sections.
    Analyze {
        #[command(flatten)]
        io: CommonIo,
        #[arg(long)]
        alpha_prime: Option<String>,
    },
    /// Build an LG model from a bundle-plus-section input.
    Sigma(CommonIo),
    /// Batyrev-Borisov pipeline on nef-partition data.
    Bb {
        #[command(flatten)]
        io: CommonIo,
        /// Override the base class lift Im(K), comma-separated rationals.
        #[arg(long)]
        k_lift: Option<String>,
    },
    /// Berglund-Hübsch transpose of weighted exponent data.
    Bh(CommonIo),
    /// Givental / Hori-Vafa presentation of the dual model.
    Givental {
        #[command(flatten)]
        io: CommonIo,
        /// Also run the semigroup generation check in this box bound.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Facets, vertices, rays, lattice points, polar of a polyhedron.
    Poly(CommonIo),
    /// Render a 2-D polyhedron as a deterministic SVG.
    Plot(CommonIo),
}

fn main() {
    if let Ok(cap) = std::env::var("TLG_DIM_CAP") {
        match cap.parse::<usize>() {
            Ok(v) => {
                tlg_core::set_dim_cap(v);
            }
            Err(_) => {
                eprintln!("error: TLG_DIM_CAP must be a nonnegative integer");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalConsistency(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Check(io) => cmd_check(io),
        Command::Dualize { io, alpha_prime } => cmd_dualize(io, alpha_prime),
        Command::Analyze { io, alpha_prime } => cmd_analyze(io, alpha_prime),
        Command::Sigma(io) => cmd_sigma(io),
        Command::Bb { io, k_lift } => cmd_bb(io, k_lift),
        Command::Bh(io) => cmd_bh(io),
        Command::Givental { io, bound } => cmd_givental(io, bound),
        Command::Poly(io) => cmd_poly(io),
        Command::Plot(io) => cmd_plot(io),
    }
}

fn load(path: &Path) -> CliResult<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(ModelFile::from_json(&text)?)
}

fn emit(io: &CommonIo, text: String) -> CliResult<()> {
    match &io.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T, pretty: bool) -> CliResult<String> {
    let body = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| Failure { code: 2, message: e.to_string() })?;
    Ok(format!("{body}\n"))
}

fn parse_rat_list(s: &str) -> CliResult<Vec<BigRational>> {
    s.split(',')
        .map(|part| Ok(parse_rat(part)?))
        .collect::<CliResult<Vec<_>>>()
}

fn section_override(io: &CommonIo) -> CliResult<Option<SectionSpec>> {
    let Some(spec) = &io.section else { return Ok(None) };
    if spec == "generic" {
        return Ok(Some(SectionSpec::Generic));
    }
    let path = spec.strip_prefix("file:").unwrap_or(spec);
    let text = std::fs::read_to_string(path)?;
    let dto: SectionDto = serde_json::from_str(&text)
        .map_err(|e| Failure { code: 2, message: format!("section file: {e}") })?;
    Ok(Some(dto.to_section()?))
}

fn build_from_sigma(mut input: SigmaInput, io: &CommonIo) -> CliResult<ToricLGModel> {
    if let Some(section) = section_override(io)? {
        input.section = section;
    }
    let model = match &input.div_override {
        Some(m) => build_lg_with_div_override(&input.bundle, m, &input.k_lift, &input.section)?,
        None => build_lg(&input.bundle, &input.k_lift, &input.section)?,
    };
    Ok(model)
}

/// A model, from either an lg-model payload or a sigma input (built).
fn load_model(io: &CommonIo) -> CliResult<ToricLGModel> {
    let file = load(&io.input)?;
    match file.payload {
        ModelPayload::LgModel(dto) => Ok(dto.to_model()?),
        ModelPayload::SigmaInput(dto) => build_from_sigma(dto.to_input()?, io),
        _ => Err(Failure {
            code: 2,
            message: "expected an lg-model or sigma-input payload".into(),
        }),
    }
}

fn with_alpha_override(
    model: ToricLGModel,
    alpha_prime: &Option<String>,
) -> CliResult<ToricLGModel> {
    let Some(raw) = alpha_prime else { return Ok(model) };
    let values = parse_rat_list(raw)?;
    if values.len() != model.b_side().matrix().rows() {
        return Err(Failure {
            code: 2,
            message: format!(
                "--alpha-prime has {} entries, the B side has {} rows",
                values.len(),
                model.b_side().matrix().rows()
            ),
        });
    }
    let lift: Vec<ComplexLift> = model
        .b_side()
        .lift()
        .iter()
        .zip(values)
        .map(|(old, im)| ComplexLift::new(old.re().clone(), im))
        .collect();
    Ok(model.with_b_lift(lift)?)
}

fn cmd_check(io: CommonIo) -> CliResult<i32> {
    let model = load_model(&io)?;
    let a = kopasetic_check(model.a_side())?;
    let b = kopasetic_check(model.b_side())?;
    let reg = regularity_check(model.a_side().matrix(), model.b_side().matrix())?;
    let pair = a.verdict && reg.ok;
    let dual_pair = b.verdict && reg.ok;
    let rep = report::CheckReport {
        command: "check".into(),
        a_side: report::KopaseticDto::from_report(&a),
        b_side: report::KopaseticDto::from_report(&b),
        regularity: report::RegularityDto::from_report(&reg),
        pair_kopasetic: pair,
        dual_pair_kopasetic: dual_pair,
        numeric_b_coefficients: io
            .numeric
            .then(|| report::numeric_coefficients(model.b_side().lift())),
        warnings: Vec::new(),
    };
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_dualize(io: CommonIo, alpha_prime: Option<String>) -> CliResult<i32> {
    let model = with_alpha_override(load_model(&io)?, &alpha_prime)?;
    let dual = dualize(&model)?;
    let rep = report::DualizeReport {
        command: "dualize".into(),
        k_row_map: dual
            .k_report
            .k_row_map
            .iter()
            .map(|m| m.map(|i| i + 1).unwrap_or(0))
            .collect(),
        facet_rows: dual.k_report.facet_indices.iter().map(|i| i + 1).collect(),
        pushed_lift: report::lift_entries(&dual.pushed_lift),
        numeric_pushed_coefficients: io
            .numeric
            .then(|| report::numeric_coefficients(&dual.pushed_lift)),
        model: ModelFile::new(ModelPayload::LgModel(LgModelDto::from_model(&dual.model))),
    };
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_analyze(io: CommonIo, alpha_prime: Option<String>) -> CliResult<i32> {
    let model = with_alpha_override(load_model(&io)?, &alpha_prime)?;
    let blocks_meta = model.blocks().ok_or_else(|| Failure {
        code: 2,
        message: "analyze needs a sigma-built model (block metadata present)".into(),
    })?;
    if blocks_meta.mon_is_a_side {
        return Err(Failure {
            code: 2,
            message: "analyze expects the original model; it dualizes internally".into(),
        });
    }
    let pair = pair_kopasetic(&model)?;
    let dual = dualize(&model)?;
    let blocks = extract_blocks(&dual.model)?;
    let alpha = normalized_alpha_prime(&dual.model, &blocks);
    let bundle = analyze_bundle(&dual.model, &alpha, blocks_meta)?;
    let dd = double_dual_diff(&model)?;

    let yprime_poly = Polyhedron::new(
        bundle.yprime.variety.div.clone(),
        bundle.yprime.pushed_lift.clone(),
    )?;
    let mut warnings = Vec::new();
    let reflexive = match yprime_poly.is_reflexive() {
        Ok(b) => Some(b),
        Err(e) => {
            warnings.push(format!("reflexivity not decidable: {e}"));
            None
        }
    };
    let yprime_svg = if bundle.yprime.variety.dim() == 2 {
        Some(svg::render_2d(&yprime_poly)?)
    } else {
        None
    };
    let rep = report::AnalyzeReport {
        command: "analyze".into(),
        pair_kopasetic: pair,
        alpha_prime: report::rat_strings(&alpha),
        dual_a_matrix: json::matrix_to_rows(dual.model.a_side().matrix()),
        xprime_facet_rows: dual.k_report.facet_indices.iter().map(|i| i + 1).collect(),
        xprime_pushed_lift: report::rat_strings(
            &dual
                .pushed_lift
                .iter()
                .map(|l| l.im().clone())
                .collect::<Vec<_>>(),
        ),
        d_prime: json::matrix_to_rows(&blocks.d_prime),
        d_prime_divisors: json::matrix_to_rows(&blocks.d_prime_divisors),
        yprime: report::YPrimeDto {
            div: json::matrix_to_rows(&bundle.yprime.variety.div),
            ray_names: bundle.yprime.variety.ray_names.clone(),
            k_row_map: bundle
                .yprime
                .k_report
                .k_row_map
                .iter()
                .map(|m| m.map(|i| i + 1).unwrap_or(0))
                .collect(),
            facet_rows: bundle
                .yprime
                .k_report
                .facet_indices
                .iter()
                .map(|i| i + 1)
                .collect(),
            pushed_divisors: bundle
                .yprime
                .pushed_divisors
                .iter()
                .map(|d| json::int_vec_to_strings(d))
                .collect(),
            pushed_lift: report::rat_strings(&bundle.yprime.pushed_lift),
            polytope_facets: report::canonical_facets(&yprime_poly)?,
            polytope_reflexive: reflexive,
        },
        is_bundle: bundle.is_bundle,
        failing_elements: bundle
            .failing_elements
            .iter()
            .map(report::TagDto::from_tag)
            .collect(),
        anomalies: bundle.anomalies.clone(),
        local_calabi_yau: [bundle.local_calabi_yau_xprime, bundle.local_calabi_yau_eprime],
        vj: report::bundle_vj_dto(&bundle, &blocks.xi_cross_tags),
        section: report::section_outcome_str(&bundle.section),
        section_witness: bundle
            .section_witness
            .as_ref()
            .map(|w| w.iter().map(|p| json::int_vec_to_strings(p)).collect()),
        double_dual_deleted_rows: dd.deleted_rows.iter().map(|i| i + 1).collect(),
        yprime_svg,
        warnings,
        conventions: vec![
            "zero-term offsets are absorbed into alpha' (the lift is taken in (alpha', 0) form)"
                .into(),
            "alpha' entries equal to 0 route the bundle test through the facet comparison"
                .into(),
        ],
    };
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_sigma(io: CommonIo) -> CliResult<i32> {
    let file = load(&io.input)?;
    let ModelPayload::SigmaInput(dto) = file.payload else {
        return Err(Failure { code: 2, message: "expected a sigma-input payload".into() });
    };
    let model = build_from_sigma(dto.to_input()?, &io)?;
    let rep = report::SigmaReport {
        command: "sigma".into(),
        model: ModelFile::new(ModelPayload::LgModel(report::model_dto(&model))),
    };
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_bb(io: CommonIo, k_lift: Option<String>) -> CliResult<i32> {
    let file = load(&io.input)?;
    let ModelPayload::NefData(dto) = file.payload else {
        return Err(Failure { code: 2, message: "expected a nef-data payload".into() });
    };
    let base = dto.base.to_variety()?;
    let parts = dto
        .parts
        .iter()
        .map(|p| json::parse_int_vec(p))
        .collect::<Result<Vec<_>, _>>()?;
    let nef = NefData::new(base, parts)?;
    let phi = phi_check(&nef)?;
    let k_values = match &k_lift {
        Some(raw) => Some(parse_rat_list(raw)?),
        None => None,
    };
    let pipeline = bb_mirror_via_duality(&nef, k_values.as_deref())?;
    let rep = bb_report(&io, &nef, phi, &pipeline)?;
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(if pipeline.all_checks_pass() && phi { 0 } else { 3 })
}

fn bb_report(
    _io: &CommonIo,
    _nef: &NefData,
    phi: bool,
    pipeline: &tlg_core::constructions::BBPipelineReport,
) -> CliResult<report::BbReport> {
    let yprime_poly = Polyhedron::new(
        pipeline.bundle_report.yprime.variety.div.clone(),
        pipeline.bundle_report.yprime.pushed_lift.clone(),
    )?;
    let pstar_svg = if pipeline.dual_data.pstar.ambient_dim() == 2 {
        Some(svg::render_2d(&pipeline.dual_data.pstar)?)
    } else {
        None
    };
    Ok(report::BbReport {
        command: "bb".into(),
        verdict: report::NefVerdictDto {
            givental: pipeline.verdict.givental,
            calabi_yau: pipeline.verdict.calabi_yau,
            parts_nonempty: pipeline.verdict.parts_nonempty,
            vertex_condition: pipeline.verdict.vertex_condition,
            valid: pipeline.verdict.valid(),
            reasons: pipeline.verdict.reasons.clone(),
        },
        phi_kronecker: phi,
        pstar_polar_facets: report::canonical_facets(&pipeline.dual_data.pstar_polar)?,
        pstar_facets: report::canonical_facets(&pipeline.dual_data.pstar)?,
        estar: pipeline
            .dual_data
            .estar
            .iter()
            .map(|e| e.iter().map(|v| json::int_vec_to_strings(v)).collect())
            .collect(),
        ystar_div: json::matrix_to_rows(&pipeline.dual_data.starred.base.div),
        dstar: pipeline
            .dual_data
            .starred
            .parts
            .iter()
            .map(|d| json::int_vec_to_strings(d))
            .collect(),
        yprime: report::YPrimeDto {
            div: json::matrix_to_rows(&pipeline.bundle_report.yprime.variety.div),
            ray_names: pipeline.bundle_report.yprime.variety.ray_names.clone(),
            k_row_map: pipeline
                .bundle_report
                .yprime
                .k_report
                .k_row_map
                .iter()
                .map(|m| m.map(|i| i + 1).unwrap_or(0))
                .collect(),
            facet_rows: pipeline
                .bundle_report
                .yprime
                .k_report
                .facet_indices
                .iter()
                .map(|i| i + 1)
                .collect(),
            pushed_divisors: pipeline
                .bundle_report
                .yprime
                .pushed_divisors
                .iter()
                .map(|d| json::int_vec_to_strings(d))
                .collect(),
            pushed_lift: report::rat_strings(&pipeline.bundle_report.yprime.pushed_lift),
            polytope_facets: report::canonical_facets(&yprime_poly)?,
            polytope_reflexive: yprime_poly.is_reflexive().ok(),
        },
        yprime_matches_pstar: pipeline.yprime_matches_pstar,
        pushed_divisors_match: pipeline.pushed_divisors_match,
        is_bundle: pipeline.is_bundle,
        dual_section_found: pipeline.dual_section_found,
        all_checks_pass: pipeline.all_checks_pass(),
        pstar_svg,
        warnings: vec!["base completeness/smoothness are user assertions".into()],
        conventions: vec![
            "anticanonical-style section: nonzero terms carry imaginary lift 1, zero terms lift 0"
                .into(),
        ],
    })
}

fn cmd_bh(io: CommonIo) -> CliResult<i32> {
    let file = load(&io.input)?;
    let ModelPayload::BhData(dto) = file.payload else {
        return Err(Failure { code: 2, message: "expected a bh-data payload".into() });
    };
    let weights = json::parse_int_vec(&dto.weights)?;
    let exponents = parse_matrix(&dto.exponents, None)?;
    let data = BHData::new(weights, exponents)?;
    let res = bh_dual(&data)?;
    let rep = report::BhReport::build("bh".into(), &data, &res);
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_givental(io: CommonIo, bound: Option<i64>) -> CliResult<i32> {
    let model = load_model(&io)?;
    let pres = givental_presentation(&model, None)?;
    let hv = hv_presentation(&model)?;
    let semigroup = match bound {
        Some(b) => Some(report::SemigroupDto::build(
            b,
            &semigroup_generation_check(&model, b)?,
        )),
        None => None,
    };
    let warnings = vec![
        "completeness of the base is a user assertion".into(),
        "the semigroup check additionally assumes the smoothness flag".into(),
    ];
    let rep = report::givental_report("givental".into(), &pres, &hv, semigroup, warnings);
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_poly(io: CommonIo) -> CliResult<i32> {
    let file = load(&io.input)?;
    let ModelPayload::Polyhedron(dto) = file.payload else {
        return Err(Failure { code: 2, message: "expected a polyhedron payload".into() });
    };
    let poly = dto.to_polyhedron(tlg_core::dim_cap())?;
    let mut warnings = Vec::new();
    let vrep = poly.vertices_and_rays()?;
    let bounded = poly.is_bounded()?;
    let (facet_rows, row_map, canonical) = match poly.facet_rows() {
        Ok(f) => (
            Some(f.facet_indices.iter().map(|i| i + 1).collect()),
            Some(report::row_map_strings(&f.row_map)),
            Some(report::canonical_facets(&poly)?),
        ),
        Err(e) => {
            warnings.push(format!("facet structure unavailable: {e}"));
            (None, None, None)
        }
    };
    let lattice_points = if bounded {
        Some(
            poly.lattice_points()?
                .iter()
                .map(|p| json::int_vec_to_strings(p))
                .collect(),
        )
    } else {
        warnings.push("unbounded: lattice point enumeration skipped".into());
        None
    };
    let reflexive = match poly.is_reflexive() {
        Ok(b) => Some(b),
        Err(e) => {
            warnings.push(format!("reflexivity not decidable: {e}"));
            None
        }
    };
    let polar_points = match poly.polar() {
        Ok(ps) => Some(ps.points.iter().map(|p| report::rat_strings(p)).collect()),
        Err(e) => {
            warnings.push(format!("polar unavailable: {e}"));
            None
        }
    };
    let rep = report::PolyReport {
        command: "poly".into(),
        ambient_dim: poly.ambient_dim(),
        feasible: poly.is_feasible(),
        interior_point: poly.interior_point().map(|p| report::rat_strings(p)),
        facet_rows,
        row_map,
        canonical_facets: canonical,
        vrep: VRepDto::from_point_set(&vrep),
        bounded,
        lattice_points,
        reflexive,
        polar_points,
        warnings,
    };
    emit(&io, to_json(&rep, io.pretty)?)?;
    Ok(0)
}

fn cmd_plot(io: CommonIo) -> CliResult<i32> {
    let file = load(&io.input)?;
    let ModelPayload::Polyhedron(dto) = file.payload else {
        return Err(Failure { code: 2, message: "expected a polyhedron payload".into() });
    };
    let poly = dto.to_polyhedron(tlg_core::dim_cap())?;
    let svg_text = svg::render_2d(&poly)?;
    emit(&io, svg_text)?;
    Ok(0)
}
