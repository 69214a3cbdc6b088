//! JSON documents for instances and solutions.
//!
//! Numbers are written as strings, `"p/q"` or integers, so that rational
//! input survives a round trip. On input, decimal strings are read exactly;
//! bare JSON numbers are read through their shortest decimal rendering, which
//! is exact for integers and for decimals of up to 15 significant digits.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hamcut::generate::{Kind as GenKind, RawInstance};
use hamcut::scalar::{format_rational, parse_rational};
use hamcut::{
    Certificate, Extended, Hyperplane, Instance, MedianInterval, PointFamily, Rational, Scalar,
    SideReport, Solution, WeightedFamily, Witness,
};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// An exact number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Num {
    pub fn int(v: i64) -> Self {
        Num(hamcut::scalar::int(v))
    }

    /// Reads a scalar through its decimal or `p/q` rendering.
    pub fn of<T: Scalar>(value: &T) -> Self {
        Num(parse_rational(&value.to_string()).expect("scalar renders as a number"))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        struct Checked;
        impl<'de> Visitor<'de> for Checked {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a string such as \"3/4\" or \"0.25\"")
            }
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Number(n) => n.to_string(),
        };
        parse_rational(&text)
            .map(Num)
            .ok_or_else(|| de::Error::invalid_value(de::Unexpected::Str(&text), &Checked))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hyperplane,
    Points,
}

impl Kind {
    pub fn mode_name(self) -> &'static str {
        match self {
            Kind::Hyperplane => "hyperplane",
            Kind::Points => "classical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub kind: Kind,
    pub families: Vec<FamilyFile>,
    /// Whether the number of families is at most the dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guaranteed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub name: String,
    pub elements: Vec<ElementFile>,
}

/// A hyperplane `{f, y}` or a point `{v}`, with an optional weight.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Num>,
}

fn nums(v: &[Num]) -> Vec<Rational> {
    v.iter().map(|n| n.0.clone()).collect()
}

fn to_nums<T: Scalar>(v: &[T]) -> Vec<Num> {
    v.iter().map(Num::of).collect()
}

impl InstanceFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid instance file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_raw(raw: &RawInstance) -> Self {
        let families = raw
            .families
            .iter()
            .enumerate()
            .map(|(j, els)| FamilyFile {
                name: format!("F{j}"),
                elements: els
                    .iter()
                    .map(|el| {
                        let coords = el.coords.iter().map(|&c| Num::int(c)).collect();
                        match raw.kind {
                            GenKind::Hyperplane => ElementFile {
                                f: Some(coords),
                                y: Some(Num::int(el.offset)),
                                ..ElementFile::default()
                            },
                            GenKind::Points => ElementFile {
                                v: Some(coords),
                                ..ElementFile::default()
                            },
                        }
                    })
                    .collect(),
            })
            .collect();
        InstanceFile {
            dimension: raw.dim,
            kind: match raw.kind {
                GenKind::Hyperplane => Kind::Hyperplane,
                GenKind::Points => Kind::Points,
            },
            families,
            guaranteed: Some(raw.guaranteed()),
        }
    }

    /// Checks shapes and reports the offending family and element.
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            bail!("dimension must be at least 1");
        }
        if self.families.is_empty() {
            bail!("instance has no families");
        }
        for (j, fam) in self.families.iter().enumerate() {
            let at = |i: usize| format!("family {j} ({:?}), element {i}", fam.name);
            if fam.elements.is_empty() {
                bail!("family {j} ({:?}) has no elements", fam.name);
            }
            for (i, el) in fam.elements.iter().enumerate() {
                let coords = match (self.kind, el) {
                    (
                        Kind::Hyperplane,
                        ElementFile {
                            f: Some(f),
                            y: Some(_),
                            v: None,
                            ..
                        },
                    ) => {
                        if f.iter().all(|c| c.0 == hamcut::scalar::int(0)) {
                            bail!("{}: covector f is zero", at(i));
                        }
                        f
                    }
                    (Kind::Hyperplane, _) => bail!("{}: expected fields f and y", at(i)),
                    (
                        Kind::Points,
                        ElementFile {
                            v: Some(v),
                            f: None,
                            y: None,
                            ..
                        },
                    ) => v,
                    (Kind::Points, _) => bail!("{}: expected field v", at(i)),
                };
                if coords.len() != self.dimension {
                    bail!(
                        "{}: vector has {} entries, dimension is {}",
                        at(i),
                        coords.len(),
                        self.dimension
                    );
                }
                if let Some(w) = &el.w {
                    if w.0 <= hamcut::scalar::int(0) {
                        bail!("{}: weight must be positive", at(i));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the instance over any backend; missing weights count as 1.
    pub fn instance<T: Scalar>(&self) -> Result<Instance<T>> {
        let exact = |q: &Rational| -> Result<T> {
            T::from_rational(q).ok_or_else(|| anyhow!("number {q} out of range"))
        };
        let vec = |v: &[Num]| nums(v).iter().map(exact).collect::<Result<Vec<T>>>();
        let weight = |el: &ElementFile| match &el.w {
            Some(w) => exact(&w.0),
            None => Ok(T::one()),
        };
        match self.kind {
            Kind::Hyperplane => {
                let fams = self
                    .families
                    .iter()
                    .map(|fam| {
                        let atoms = fam
                            .elements
                            .iter()
                            .map(|el| {
                                let f = vec(el.f.as_deref().unwrap_or_default())?;
                                let y = exact(&el.y.as_ref().expect("validated").0)?;
                                Ok((Hyperplane::new(f, y)?, weight(el)?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(WeightedFamily::new(fam.name.clone(), atoms)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::hyperplane(fams)?)
            }
            Kind::Points => {
                let fams = self
                    .families
                    .iter()
                    .map(|fam| {
                        let atoms = fam
                            .elements
                            .iter()
                            .map(|el| Ok((vec(el.v.as_deref().unwrap_or_default())?, weight(el)?)))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(PointFamily::new(fam.name.clone(), atoms)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::classical(fams)?)
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.families.iter().map(|f| f.name.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Infeasible,
    BestEffort,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub kind: Kind,
    pub dimension: usize,
    pub status: Status,
    pub solutions: Vec<SolutionEntry>,
    /// Direction with the smallest gap when nothing was certified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_effort: Option<BestEffort>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestEffort {
    pub direction: Vec<Num>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Num>,
    pub per_family: Vec<FamilyMasses>,
    pub method: String,
    pub certificate: CertificateFile,
    /// Every parameter in this closed interval also solves along the line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyMasses {
    pub name: String,
    pub upper_mass: Num,
    pub lower_mass: Num,
    pub fence_mass: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CertificateFile {
    Exact,
    Float { eps: f64, min_margin: f64 },
}

impl From<Certificate> for CertificateFile {
    fn from(c: Certificate) -> Self {
        match c {
            Certificate::Exact => CertificateFile::Exact,
            Certificate::Float { eps, min_margin } => CertificateFile::Float { eps, min_margin },
        }
    }
}

pub fn masses<T: Scalar>(names: &[String], reports: &[SideReport<T>]) -> Vec<FamilyMasses> {
    names
        .iter()
        .zip(reports)
        .map(|(name, r)| FamilyMasses {
            name: name.clone(),
            upper_mass: Num::of(&r.upper_mass),
            lower_mass: Num::of(&r.lower_mass),
            fence_mass: Num::of(&r.fence_mass),
        })
        .collect()
}

fn bound<T: Scalar>(b: &Extended<T>) -> String {
    match b {
        Extended::NegInf => "-inf".into(),
        Extended::PosInf => "+inf".into(),
        Extended::Finite(v) => Num::of(v).to_string(),
    }
}

fn range_text<T: Scalar>(r: &MedianInterval<T>) -> [String; 2] {
    [bound(&r.lo), bound(&r.hi)]
}

impl SolutionEntry {
    pub fn from_solution<T: Scalar>(names: &[String], sol: &Solution<T>) -> Self {
        let mut entry = SolutionEntry {
            e: None,
            x: None,
            v: None,
            f: None,
            y: None,
            per_family: masses(names, &sol.reports),
            method: sol.method.to_string(),
            certificate: sol.certificate.clone().into(),
            range: Some(range_text(&sol.range)),
        };
        match &sol.witness {
            Witness::Line(p) => {
                entry.e = Some(to_nums(p.direction().coords()));
                entry.x = Some(Num::of(p.param()));
                entry.v = Some(to_nums(&p.point()));
            }
            Witness::Cut(h) => {
                entry.f = Some(to_nums(h.covector()));
                entry.y = Some(Num::of(h.offset()));
            }
        }
        entry
    }

    /// `(e, x)` or `(f, y)` depending on the kind.
    pub fn witness(&self, kind: Kind) -> Result<(Vec<Rational>, Rational)> {
        let (dir, param, what) = match kind {
            Kind::Hyperplane => (&self.e, &self.x, "e and x"),
            Kind::Points => (&self.f, &self.y, "f and y"),
        };
        match (dir, param) {
            (Some(d), Some(p)) => Ok((nums(d), p.0.clone())),
            _ => bail!("solution entry lacks {what}"),
        }
    }
}

impl SolutionFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("invalid solution file {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
