//! Problem files: TOML with sections `[group]`, `[subgroup-m]`, `[torus-d]`,
//! `[torus-a]`, `[centralizer-weyl]` and an optional `[probe]`.
//!
//! ```toml
//! [group]
//! family = "res-sl"
//! n = 2
//! m = 2
//!
//! [subgroup-m]
//! generators = "trivial"
//!
//! [torus-d]
//! basis = "full"
//!
//! [torus-a]
//! basis = [["1", "-1", "1", "-1"]]
//!
//! [centralizer-weyl]
//! mode = "auto-trivial-m"
//! ```
//!
//! Rational entries are strings `"p/q"` or `"p"`. A generator of `Lie(M)` is
//! a list of `m` square matrices (lists of rows); so is an explicit
//! centralizer element.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;
use toml::Spanned;

use crate::criterion::{CentralizerSource, CriterionError, GroupConfig};
use crate::roots::{CartanSpace, Family, GroupSpec, LieElement};
use crate::scalar::parse_rational;
use crate::{RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field} (line {line}, column {column}): {reason}")]
    Field {
        field: String,
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("{0}")]
    Invalid(#[from] CriterionError),
}

type Entry = Spanned<String>;
type RawMatrix = Vec<Vec<Entry>>;

/// `"trivial"`/`"full"` or an explicit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Listed<T> {
    Keyword(String),
    Items(Vec<T>),
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Listed<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(std::marker::PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = Listed<T>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a keyword string or an array")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Self::Value, E> {
                Ok(Listed::Keyword(s.to_string()))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut items = Vec::new();
                while let Some(x) = seq.next_element()? {
                    items.push(x);
                }
                Ok(Listed::Items(items))
            }
        }
        d.deserialize_any(V(std::marker::PhantomData))
    }
}

impl<T: Serialize> Serialize for Listed<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Listed::Keyword(k) => s.serialize_str(k),
            Listed::Items(items) => items.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub family: Family,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSection {
    pub generators: Listed<Vec<RawMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    pub basis: Listed<Vec<Entry>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralizerMode {
    AutoTrivialM,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralizerSection {
    pub mode: CentralizerMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<Vec<RawMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    #[serde(default = "ProbeSection::default_d")]
    pub d: u64,
    #[serde(default = "ProbeSection::default_radius")]
    pub radius: f64,
    #[serde(default = "ProbeSection::default_points")]
    pub points: usize,
    #[serde(default = "ProbeSection::default_ns")]
    pub ns: Vec<u32>,
    #[serde(default = "ProbeSection::default_seed")]
    pub seed: u64,
}

impl ProbeSection {
    fn default_d() -> u64 {
        2
    }
    fn default_radius() -> f64 {
        5.0
    }
    fn default_points() -> usize {
        21
    }
    fn default_ns() -> Vec<u32> {
        vec![0, 2, 4, 6]
    }
    fn default_seed() -> u64 {
        0x5EED
    }
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self {
            d: Self::default_d(),
            radius: Self::default_radius(),
            points: Self::default_points(),
            ns: Self::default_ns(),
            seed: Self::default_seed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub group: GroupSection,
    #[serde(rename = "subgroup-m")]
    pub subgroup_m: SubgroupSection,
    #[serde(rename = "torus-d")]
    pub torus_d: BasisSection,
    #[serde(rename = "torus-a")]
    pub torus_a: BasisSection,
    #[serde(rename = "centralizer-weyl")]
    pub centralizer_weyl: CentralizerSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSection>,
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Converts spanned entries, reporting problems with a field path and the
/// entry's position in the source text.
struct Reader<'a> {
    text: &'a str,
}

impl Reader<'_> {
    fn field_err(&self, field: String, span: std::ops::Range<usize>, reason: impl Into<String>) -> ConfigError {
        let (line, column) = line_column(self.text, span.start);
        ConfigError::Field {
            field,
            line,
            column,
            reason: reason.into(),
        }
    }

    fn rational(&self, field: String, e: &Entry) -> Result<Rational, ConfigError> {
        parse_rational(e.get_ref())
            .ok_or_else(|| self.field_err(field, e.span(), format!("{:?} is not a rational \"p/q\" with q != 0", e.get_ref())))
    }

    fn vector(&self, field: &str, v: &[Entry]) -> Result<Vec<Rational>, ConfigError> {
        v.iter()
            .enumerate()
            .map(|(i, e)| self.rational(format!("{field}[{i}]"), e))
            .collect()
    }

    fn matrix(&self, field: &str, rows: &RawMatrix, n: usize) -> Result<RatMatrix, ConfigError> {
        let first = rows.first().and_then(|r| r.first()).map_or(0..0, |e| e.span());
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(self.field_err(field.to_string(), first, format!("expected a {n}x{n} matrix")));
        }
        let data = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.vector(&format!("{field}[{i}]"), r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix::from_rows(n, &data).expect("shape checked"))
    }

    fn factors(&self, field: &str, mats: &[RawMatrix], spec: &GroupSpec) -> Result<Vec<RatMatrix>, ConfigError> {
        if mats.len() != spec.m() {
            let span = mats.first().and_then(|m| m.first()).and_then(|r| r.first()).map_or(0..0, |e| e.span());
            return Err(self.field_err(field.to_string(), span, format!("expected {} factor matrices", spec.m())));
        }
        mats.iter()
            .enumerate()
            .map(|(k, m)| self.matrix(&format!("{field}[{k}]"), m, spec.n()))
            .collect()
    }

    fn basis(&self, field: &str, b: &BasisSection, space: &CartanSpace) -> Result<Vec<Vec<Rational>>, ConfigError> {
        match &b.basis {
            Listed::Keyword(k) if k == "full" => Ok(space.full_subspace().basis().to_vec()),
            Listed::Keyword(k) => Err(ConfigError::Field {
                field: field.into(),
                line: 0,
                column: 0,
                reason: format!("unknown keyword {k:?}; expected \"full\" or a list of vectors"),
            }),
            Listed::Items(vs) => vs
                .iter()
                .enumerate()
                .map(|(i, v)| self.vector(&format!("{field}[{i}]"), v))
                .collect(),
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files serialize")
    }

    pub fn spec(&self) -> Result<GroupSpec, ConfigError> {
        GroupSpec::res_sl(self.group.n, self.group.m).map_err(|e| ConfigError::Field {
            field: "group".into(),
            line: 0,
            column: 0,
            reason: e.to_string(),
        })
    }

    /// Build and validate the configuration. `text` is the source the file
    /// was parsed from, used for positions in error messages.
    pub fn to_config(&self, text: &str) -> Result<GroupConfig, ConfigError> {
        let rd = Reader { text };
        let spec = self.spec()?;
        let space = CartanSpace::new(spec);
        let gens = match &self.subgroup_m.generators {
            Listed::Keyword(k) if k == "trivial" => Vec::new(),
            Listed::Keyword(k) => {
                return Err(ConfigError::Field {
                    field: "subgroup-m.generators".into(),
                    line: 0,
                    column: 0,
                    reason: format!("unknown keyword {k:?}; expected \"trivial\" or a list of generators"),
                })
            }
            Listed::Items(items) => items
                .iter()
                .enumerate()
                .map(|(j, mats)| {
                    let field = format!("subgroup-m.generators[{j}]");
                    let factors = rd.factors(&field, mats, &spec)?;
                    LieElement::new(&spec, factors).map_err(|e| ConfigError::Field {
                        field,
                        line: 0,
                        column: 0,
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let d = rd.basis("torus-d.basis", &self.torus_d, &space)?;
        let a = rd.basis("torus-a.basis", &self.torus_a, &space)?;
        let source = match self.centralizer_weyl.mode {
            CentralizerMode::AutoTrivialM => CentralizerSource::AutoTrivialM,
            CentralizerMode::Explicit => CentralizerSource::Explicit(
                self.centralizer_weyl
                    .elements
                    .iter()
                    .enumerate()
                    .map(|(j, mats)| rd.factors(&format!("centralizer-weyl.elements[{j}]"), mats, &spec))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(GroupConfig::new(spec, gens, d, a, source)?)
    }
}

/// Parse and validate in one step.
pub fn load(text: &str) -> Result<(ProblemFile, GroupConfig), ConfigError> {
    let file = ProblemFile::parse(text)?;
    let config = file.to_config(text)?;
    Ok((file, config))
}
