//! JSON file formats. Integers that fit in `i64` are written as numbers and
//! larger ones as decimal strings; rationals are always `"p/q"` strings.

use std::str::FromStr;

use k3kit_core::fibration::{FiberReport, FibrationError, WeierstrassModel};
use k3kit_core::lattice::{IntegralLattice, LatticeError};
use k3kit_core::matrix::Matrix;
use k3kit_core::poly::Poly;
use k3kit_core::stablemap::{Component, ImageKind, StableMapConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("gram matrix has {rows} rows but rank is {rank}")]
    RankMismatch { rank: usize, rows: usize },
    #[error("gram matrix is not square")]
    Ragged,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
}

/// Arbitrary-precision integer in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Signed(i64),
            Unsigned(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Signed(v) => Ok(JsonInt(v.into())),
            Raw::Unsigned(v) => Ok(JsonInt(v.into())),
            Raw::Text(s) => s.trim().parse().map(JsonInt).map_err(de::Error::custom),
        }
    }
}

/// Rational number as a `"p/q"` (or `"p"`) string; integers are also accepted
/// on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonRational(BigRational::from_integer(v.into()))),
            Raw::Text(s) => parse_rational(&s).map(JsonRational).map_err(de::Error::custom),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| format!("bad numerator in {:?}: {}", s, e))?;
    let d = BigInt::from_str(d).map_err(|e| format!("bad denominator in {:?}: {}", s, e))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {:?}", s));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub rank: usize,
    pub gram: Vec<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl LatticeFile {
    pub fn from_lattice(l: &IntegralLattice, name: Option<&str>) -> Self {
        let gram = l.gram().to_rows().into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect();
        LatticeFile { rank: l.rank(), gram, name: name.map(str::to_owned) }
    }

    pub fn to_lattice(&self) -> Result<IntegralLattice, FormatError> {
        if self.gram.len() != self.rank {
            return Err(FormatError::RankMismatch { rank: self.rank, rows: self.gram.len() });
        }
        let rows: Vec<Vec<BigInt>> = self.gram.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
        if rows.iter().any(|r| r.len() != self.rank) {
            return Err(FormatError::Ragged);
        }
        let gram =
            if self.rank == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows).ok_or(FormatError::Ragged)? };
        Ok(IntegralLattice::new(gram)?)
    }
}

pub fn read_lattice(json: &str) -> Result<(IntegralLattice, Option<String>), FormatError> {
    let f: LatticeFile = serde_json::from_str(json)?;
    Ok((f.to_lattice()?, f.name))
}

pub fn write_lattice(l: &IntegralLattice, name: Option<&str>) -> String {
    to_json(&LatticeFile::from_lattice(l, name))
}

fn poly_coeffs(p: &Poly) -> Vec<JsonRational> {
    p.coeffs().iter().cloned().map(JsonRational).collect()
}

fn poly_from(c: &[JsonRational]) -> Poly {
    Poly::new(c.iter().map(|x| x.0.clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub a: Vec<JsonRational>,
    pub b: Vec<JsonRational>,
}

impl ModelFile {
    pub fn from_model(m: &WeierstrassModel) -> Self {
        ModelFile { a: poly_coeffs(m.a()), b: poly_coeffs(m.b()) }
    }

    pub fn to_model(&self) -> Result<WeierstrassModel, FormatError> {
        Ok(WeierstrassModel::new(poly_from(&self.a), poly_from(&self.b))?)
    }
}

pub fn read_model(json: &str) -> Result<WeierstrassModel, FormatError> {
    serde_json::from_str::<ModelFile>(json)?.to_model()
}

/// Place of the base: monic coefficient list (low to high) or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceJson {
    Finite(Vec<JsonRational>),
    Infinity(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberJson {
    pub place: PlaceJson,
    pub kodaira: String,
    pub v_c4: Option<u32>,
    pub v_c6: Option<u32>,
    pub v_delta: u32,
    pub components: u32,
    pub euler: u32,
    pub degree_weight: usize,
}

impl From<&FiberReport> for FiberJson {
    fn from(r: &FiberReport) -> Self {
        use k3kit_core::fibration::Place;
        let place = match &r.place {
            Place::Finite(p) => PlaceJson::Finite(poly_coeffs(p)),
            Place::Infinity => PlaceJson::Infinity("inf".into()),
        };
        FiberJson {
            place,
            kodaira: r.kodaira.to_string(),
            v_c4: r.v_c4,
            v_c6: r.v_c6,
            v_delta: r.v_delta,
            components: r.components,
            euler: r.euler,
            degree_weight: r.degree_weight,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KindJson(pub ImageKind);

impl Serialize for KindJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl<'de> Deserialize<'de> for KindJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(KindJson).map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub genus: u32,
    pub kind: KindJson,
    pub ndeg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub dim_base: u32,
}

impl From<&StableMapConfig> for ConfigFile {
    fn from(c: &StableMapConfig) -> Self {
        ConfigFile {
            components: c
                .components
                .iter()
                .map(|x| ComponentJson { genus: x.genus, kind: KindJson(x.kind), ndeg: x.ndeg })
                .collect(),
            edges: c.edges.clone(),
            dim_base: c.dim_base,
        }
    }
}

impl From<&ConfigFile> for StableMapConfig {
    fn from(c: &ConfigFile) -> Self {
        StableMapConfig {
            components: c
                .components
                .iter()
                .map(|x| Component { genus: x.genus, kind: x.kind.0, ndeg: x.ndeg })
                .collect(),
            edges: c.edges.clone(),
            dim_base: c.dim_base,
        }
    }
}

pub fn read_config(json: &str) -> Result<StableMapConfig, FormatError> {
    Ok(StableMapConfig::from(&serde_json::from_str::<ConfigFile>(json)?))
}

/// Pretty JSON with a trailing newline; field order follows declaration order.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
