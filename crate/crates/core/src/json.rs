//! Interchange formats.
//!
//! Everything exact goes through strings: integers as decimal strings,
//! rationals as `"p/q"` (plain `"p"` when the denominator is 1), matrices
//! as arrays of rows of integer strings. Model files carry a format
//! version and a `kind` tag.

use std::str::FromStr;

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;
use crate::lineardata::{ComplexLift, LinearData, MonRowTag, SigmaBlocks, ToricLGModel};
use crate::polyhedra::{PointSet, Polyhedron};
use crate::sigma::{ExplicitTerm, SectionSpec, SigmaInput, SplitBundleData, ToricVarietyData};
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "1";

pub fn fmt_int(x: &BigInt) -> String {
    x.to_string()
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim())
        .map_err(|e| Error::InvalidInput(format!("bad integer {s:?}: {e}")))
}

pub fn fmt_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den == BigInt::from(0) {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
    }
}

pub fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.row_slices()
        .map(|row| row.iter().map(fmt_int).collect())
        .collect()
}

pub fn parse_matrix(rows: &[Vec<String>], expect_cols: Option<usize>) -> Result<IntMatrix> {
    let r = rows.len();
    let c = match (rows.first(), expect_cols) {
        (Some(row), _) => row.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        for s in row {
            entries.push(parse_int(s)?);
        }
    }
    IntMatrix::new(r, c, entries)
}

pub fn int_vec_to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(fmt_int).collect()
}

pub fn parse_int_vec(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| parse_int(s)).collect()
}

pub fn rat_vec_to_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn parse_rat_vec(v: &[String]) -> Result<Vec<BigRational>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftEntryDto {
    pub re: String,
    pub im: String,
}

impl LiftEntryDto {
    pub fn from_lift(l: &ComplexLift) -> Self {
        LiftEntryDto { re: fmt_rat(l.re()), im: fmt_rat(l.im()) }
    }

    pub fn to_lift(&self) -> Result<ComplexLift> {
        Ok(ComplexLift::new(parse_rat(&self.re)?, parse_rat(&self.im)?))
    }
}

pub fn lifts_to_dto(lifts: &[ComplexLift]) -> Vec<LiftEntryDto> {
    lifts.iter().map(LiftEntryDto::from_lift).collect()
}

pub fn parse_lifts(dtos: &[LiftEntryDto]) -> Result<Vec<ComplexLift>> {
    dtos.iter().map(|d| d.to_lift()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyhedronDto {
    pub normals: Vec<Vec<String>>,
    pub offsets: Vec<String>,
}

impl PolyhedronDto {
    pub fn from_polyhedron(p: &Polyhedron) -> Self {
        PolyhedronDto {
            normals: matrix_to_rows(p.normals()),
            offsets: rat_vec_to_strings(p.offsets()),
        }
    }

    pub fn to_polyhedron(&self, dim_cap: usize) -> Result<Polyhedron> {
        let normals = parse_matrix(&self.normals, None)?;
        let offsets = parse_rat_vec(&self.offsets)?;
        Polyhedron::with_dim_cap(normals, offsets, dim_cap)
    }
}

/// V-representation payload: exact vertices plus primitive rays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VRepDto {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
}

impl VRepDto {
    pub fn from_point_set(s: &PointSet) -> Self {
        VRepDto {
            vertices: s.points.iter().map(|p| rat_vec_to_strings(p)).collect(),
            rays: s.rays.iter().map(|r| int_vec_to_strings(r)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearDataDto {
    pub matrix: Vec<Vec<String>>,
    pub lift: Vec<LiftEntryDto>,
}

impl LinearDataDto {
    pub fn from_linear_data(d: &LinearData) -> Self {
        LinearDataDto {
            matrix: matrix_to_rows(d.matrix()),
            lift: lifts_to_dto(d.lift()),
        }
    }

    pub fn to_linear_data(&self) -> Result<LinearData> {
        LinearData::new(parse_matrix(&self.matrix, None)?, parse_lifts(&self.lift)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonTagDto {
    /// 1-based summand index.
    pub summand: usize,
    pub point: Vec<String>,
    pub zero: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlocksDto {
    pub base_cols: usize,
    pub c: usize,
    pub base_rows: usize,
    pub base_div: Vec<Vec<String>>,
    /// One vector of length `base_rows` per summand.
    pub divisors: Vec<Vec<String>>,
    pub mon_tags: Vec<MonTagDto>,
    pub mon_is_a_side: bool,
    #[serde(default)]
    pub base_smooth: bool,
    #[serde(default)]
    pub base_complete: bool,
}

impl BlocksDto {
    pub fn from_blocks(b: &SigmaBlocks) -> Self {
        BlocksDto {
            base_cols: b.base_cols,
            c: b.c,
            base_rows: b.base_rows,
            base_div: matrix_to_rows(&b.base_div),
            divisors: (0..b.c)
                .map(|j| int_vec_to_strings(&b.divisors.column(j)))
                .collect(),
            mon_tags: b
                .mon_tags
                .iter()
                .map(|t| MonTagDto {
                    summand: t.bundle_index + 1,
                    point: int_vec_to_strings(&t.point),
                    zero: t.is_zero,
                })
                .collect(),
            mon_is_a_side: b.mon_is_a_side,
            base_smooth: b.base_smooth,
            base_complete: b.base_complete,
        }
    }

    pub fn to_blocks(&self) -> Result<SigmaBlocks> {
        let base_div = parse_matrix(&self.base_div, Some(self.base_cols))?;
        if base_div.rows() != self.base_rows {
            return Err(Error::InvalidInput("base_div row count mismatch".into()));
        }
        let mut divisors = IntMatrix::zero(self.base_rows, self.c);
        if self.divisors.len() != self.c {
            return Err(Error::InvalidInput("divisor count differs from c".into()));
        }
        for (j, d) in self.divisors.iter().enumerate() {
            let v = parse_int_vec(d)?;
            if v.len() != self.base_rows {
                return Err(Error::InvalidInput("divisor length mismatch".into()));
            }
            for (i, x) in v.into_iter().enumerate() {
                divisors.set(i, j, x);
            }
        }
        let mon_tags = self
            .mon_tags
            .iter()
            .map(|t| {
                if t.summand == 0 || t.summand > self.c {
                    return Err(Error::InvalidInput(format!(
                        "summand index {} out of range",
                        t.summand
                    )));
                }
                Ok(MonRowTag {
                    bundle_index: t.summand - 1,
                    point: parse_int_vec(&t.point)?,
                    is_zero: t.zero,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SigmaBlocks {
            base_cols: self.base_cols,
            c: self.c,
            base_rows: self.base_rows,
            base_div,
            divisors,
            mon_tags,
            mon_is_a_side: self.mon_is_a_side,
            base_smooth: self.base_smooth,
            base_complete: self.base_complete,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LgModelDto {
    #[serde(rename = "A")]
    pub a: LinearDataDto,
    #[serde(rename = "B")]
    pub b: LinearDataDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlocksDto>,
}

impl LgModelDto {
    pub fn from_model(m: &ToricLGModel) -> Self {
        LgModelDto {
            a: LinearDataDto::from_linear_data(m.a_side()),
            b: LinearDataDto::from_linear_data(m.b_side()),
            blocks: m.blocks().map(BlocksDto::from_blocks),
        }
    }

    pub fn to_model(&self) -> Result<ToricLGModel> {
        let blocks = self.blocks.as_ref().map(|b| b.to_blocks()).transpose()?;
        ToricLGModel::new(self.a.to_linear_data()?, self.b.to_linear_data()?, blocks)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseDto {
    pub rays: Vec<String>,
    pub div: Vec<Vec<String>>,
    #[serde(default)]
    pub smooth: bool,
    #[serde(default)]
    pub complete: bool,
}

impl BaseDto {
    pub fn from_variety(v: &ToricVarietyData) -> Self {
        BaseDto {
            rays: v.ray_names.clone(),
            div: matrix_to_rows(&v.div),
            smooth: v.smooth,
            complete: v.complete,
        }
    }

    pub fn to_variety(&self) -> Result<ToricVarietyData> {
        ToricVarietyData::new(
            self.rays.clone(),
            parse_matrix(&self.div, None)?,
            self.smooth,
            self.complete,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionTermDto {
    /// 1-based summand index.
    pub summand: usize,
    pub exponent: Vec<String>,
    pub coeff: LiftEntryDto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<SectionTermDto>>,
}

impl SectionDto {
    pub fn to_section(&self) -> Result<SectionSpec> {
        match (&self.generic, &self.terms) {
            (Some(true), None) => Ok(SectionSpec::Generic),
            (None, Some(terms)) | (Some(false), Some(terms)) => {
                let parsed = terms
                    .iter()
                    .map(|t| {
                        if t.summand == 0 {
                            return Err(Error::InvalidInput("summand indices are 1-based".into()));
                        }
                        Ok(ExplicitTerm {
                            bundle_index: t.summand - 1,
                            exponent: parse_int_vec(&t.exponent)?,
                            coeff: t.coeff.to_lift()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SectionSpec::Explicit(parsed))
            }
            _ => Err(Error::InvalidInput(
                "section must be {\"generic\": true} or {\"terms\": [...]}".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaInputDto {
    pub base: BaseDto,
    pub divisors: Vec<Vec<String>>,
    #[serde(rename = "K_lift")]
    pub k_lift: Vec<LiftEntryDto>,
    pub section: SectionDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub div_x_override: Option<Vec<Vec<String>>>,
}

impl SigmaInputDto {
    pub fn to_input(&self) -> Result<SigmaInput> {
        let base = self.base.to_variety()?;
        let divisors = self
            .divisors
            .iter()
            .map(|d| parse_int_vec(d))
            .collect::<Result<Vec<_>>>()?;
        let bundle = SplitBundleData::new(base, divisors)?;
        Ok(SigmaInput {
            bundle,
            k_lift: parse_lifts(&self.k_lift)?,
            section: self.section.to_section()?,
            div_override: self
                .div_x_override
                .as_ref()
                .map(|m| parse_matrix(m, None))
                .transpose()?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NefDataDto {
    pub base: BaseDto,
    pub parts: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BhDataDto {
    pub weights: Vec<String>,
    pub exponents: Vec<Vec<String>>,
}

/// Tagged payload of a model file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelPayload {
    #[serde(rename = "lg-model")]
    LgModel(LgModelDto),
    #[serde(rename = "sigma-input")]
    SigmaInput(SigmaInputDto),
    #[serde(rename = "nef-data")]
    NefData(NefDataDto),
    #[serde(rename = "bh-data")]
    BhData(BhDataDto),
    #[serde(rename = "polyhedron")]
    Polyhedron(PolyhedronDto),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: String,
    #[serde(flatten)]
    pub payload: ModelPayload,
}

impl ModelFile {
    pub fn new(payload: ModelPayload) -> Self {
        ModelFile { format_version: FORMAT_VERSION.into(), payload }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("schema error: {e}")))?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unrecognized format_version {:?} (expected {:?})",
                file.format_version, FORMAT_VERSION
            )));
        }
        Ok(file)
    }
}
