//! JSON input documents and their validation into library objects.
//!
//! A document is an object carrying either a `"builder"` key (a named
//! construction with parameters) or a `"kind"` key (explicit data). The
//! schema is in `docs/schema/document.schema.json`.

use std::fmt;
use std::sync::Arc;

use holodual_core::cyclo::Cyclotomic;
use holodual_core::finab::{FiniteAbelianGroup, Hom};
use holodual_core::hopf::{function_algebra_hopf, group_algebra_hopf, FDHopf, FiniteGroup, GroupHom};
use holodual_core::hopftowers::{
    ind_group_algebra, pro_function_algebra, pro_group_algebra, restriction_function_algebra, Direction, HopfTower,
    TowerOfGroups,
};
use holodual_core::linalg::Matrix;
use holodual_core::locfun::LocallyConstantFunction;
use holodual_core::towers::{self, IndGroup, ProGroup};
use holodual_core::Rational;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::Value;

use crate::CliError;

/// A parsed but not yet validated document.
#[derive(Debug, Clone)]
pub enum Document {
    Builder(BuilderDoc),
    Kind(KindDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuilderDoc {
    Pruefer { p: u64, depth: usize },
    Padic { p: u64, depth: usize },
    DirectSumTower { d: u64, depth: usize },
    ProductPro { d: u64, depth: usize },
    FactorialInd { depth: usize },
    SymmetricTower { depth: usize },
    ProductProGroup { group: GroupDoc, depth: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KindDoc {
    FiniteAbelian {
        #[serde(default)]
        invariant_factors: Option<Vec<u64>>,
        #[serde(default)]
        cyclic_orders: Option<Vec<u64>>,
    },
    IndTower {
        levels: Vec<Vec<u64>>,
        transitions: Vec<Vec<Vec<i64>>>,
    },
    ProTower {
        levels: Vec<Vec<u64>>,
        transitions: Vec<Vec<Vec<i64>>>,
    },
    Function {
        tower: Box<Document>,
        level: usize,
        table: Vec<ValueDoc>,
    },
    FiniteGroup {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        table: Option<Vec<Vec<usize>>>,
    },
    Hopf {
        algebra: AlgebraKind,
        group: GroupDoc,
        #[serde(default)]
        antipode: Option<AntipodeDoc>,
        #[serde(default)]
        label: Option<String>,
    },
    GroupTower {
        direction: DirectionDoc,
        levels: Vec<GroupDoc>,
        transitions: Vec<Vec<usize>>,
    },
    HopfTower {
        construction: Construction,
        tower: Box<Document>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    GroupAlgebra,
    FunctionAlgebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionDoc {
    Ind,
    Pro,
}

impl From<DirectionDoc> for Direction {
    fn from(d: DirectionDoc) -> Self {
        match d {
            DirectionDoc::Ind => Direction::Ind,
            DirectionDoc::Pro => Direction::Pro,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// `C[G_n]` along injections.
    GroupAlgebra,
    /// `C^{G_n}` along restrictions.
    RestrictedFunctions,
    /// `C^{G_n}` along inflations.
    LocallyConstantFunctions,
    /// `C[G_n]` along push-forwards.
    ProfiniteConvolution,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AntipodeDoc {
    /// Only `"identity"` is recognised.
    Named(String),
    Matrix(Vec<Vec<RationalDoc>>),
}

/// A rational written as an integer or as a string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalDoc(pub Rational);

impl<'de> Deserialize<'de> for RationalDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RationalDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RationalDoc, E> {
                Ok(RationalDoc(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RationalDoc, E> {
                Ok(RationalDoc(Rational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalDoc, E> {
                parse_rational(v).map(RationalDoc).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.ends_with("/0") || s.contains("/-") {
        return Err(format!("bad rational {s:?}"));
    }
    s.parse::<Rational>().map_err(|_| format!("bad rational {s:?}"))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclotomicDoc {
    conductor: u64,
    coeffs: Vec<RationalDoc>,
}

/// A function value: a rational or `{"conductor": m, "coeffs": [...]}` in
/// the power basis `1, ζ_m, …, ζ_m^{φ(m)-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDoc(pub Cyclotomic);

impl<'de> Deserialize<'de> for ValueDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ValueDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational or a cyclotomic object {\"conductor\", \"coeffs\"}")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ValueDoc, E> {
                Ok(ValueDoc(Cyclotomic::from_integer(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ValueDoc, E> {
                Ok(ValueDoc(Cyclotomic::from_rational(Rational::from_integer(v.into()))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ValueDoc, E> {
                parse_rational(v).map(|q| ValueDoc(Cyclotomic::from_rational(q))).map_err(E::custom)
            }
            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<ValueDoc, A::Error> {
                let c = CyclotomicDoc::deserialize(de::value::MapAccessDeserializer::new(map))?;
                let coeffs = c.coeffs.into_iter().map(|r| r.0).collect();
                Cyclotomic::new(c.conductor, coeffs).map(ValueDoc).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// A finite group: a name such as `"symmetric:3"`, or an object with a
/// `name` or a Cayley `table` (optionally tagged `"kind": "finite_group"`).
#[derive(Debug, Clone)]
pub enum GroupDoc {
    Named(String),
    Table { name: Option<String>, table: Vec<Vec<usize>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupObject {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
}

impl<'de> Deserialize<'de> for GroupDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = GroupDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a group name or a finite_group object")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<GroupDoc, E> {
                Ok(GroupDoc::Named(v.to_string()))
            }
            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<GroupDoc, A::Error> {
                let g = GroupObject::deserialize(de::value::MapAccessDeserializer::new(map))?;
                if let Some(k) = g.kind.as_deref() {
                    if k != "finite_group" {
                        return Err(de::Error::custom(format!("expected kind \"finite_group\", found {k:?}")));
                    }
                }
                group_doc_from_parts(g.name, g.table).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn group_doc_from_parts(name: Option<String>, table: Option<Vec<Vec<usize>>>) -> Result<GroupDoc, String> {
    match (name, table) {
        (name, Some(table)) => Ok(GroupDoc::Table { name, table }),
        (Some(name), None) => Ok(GroupDoc::Named(name)),
        (None, None) => Err("a finite group needs a name or a table".into()),
    }
}

impl<'de> Deserialize<'de> for Document {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(d)?;
        let Value::Object(map) = &value else {
            return Err(de::Error::custom("a document must be a JSON object"));
        };
        match (map.contains_key("builder"), map.contains_key("kind")) {
            (true, false) => BuilderDoc::deserialize(value).map(Document::Builder).map_err(de::Error::custom),
            (false, true) => KindDoc::deserialize(value).map(Document::Kind).map_err(de::Error::custom),
            (true, true) => Err(de::Error::custom("a document has either \"builder\" or \"kind\", not both")),
            (false, false) => Err(de::Error::custom("a document needs a \"builder\" or a \"kind\" key")),
        }
    }
}

/// Parses document text. Syntax and schema errors carry line and column.
pub fn parse(text: &str) -> Result<Document, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A validated object.
#[derive(Debug, Clone)]
pub enum Subject {
    Abelian(FiniteAbelianGroup),
    Ind(IndGroup),
    Pro(ProGroup),
    Function(LocallyConstantFunction),
    Group(FiniteGroup),
    Hopf(FDHopf),
    GroupTower(TowerOfGroups),
    HopfTower(HopfTower),
}

impl Subject {
    pub fn kind(&self) -> &'static str {
        match self {
            Subject::Abelian(_) => "finite_abelian",
            Subject::Ind(_) => "ind_tower",
            Subject::Pro(_) => "pro_tower",
            Subject::Function(_) => "function",
            Subject::Group(_) => "finite_group",
            Subject::Hopf(_) => "hopf",
            Subject::GroupTower(_) => "group_tower",
            Subject::HopfTower(_) => "hopf_tower",
        }
    }
}

fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Builds and checks the object graph. `depth` overrides the depth of a
/// builder and truncates an explicit tower.
pub fn validate(doc: &Document, depth: Option<usize>) -> Result<Subject, CliError> {
    match doc {
        Document::Builder(b) => build(b, depth),
        Document::Kind(k) => validate_kind(k, depth),
    }
}

fn build(b: &BuilderDoc, depth: Option<usize>) -> Result<Subject, CliError> {
    let pick = |d: usize| depth.unwrap_or(d);
    Ok(match b {
        BuilderDoc::Pruefer { p, depth } => Subject::Ind(towers::pruefer(*p, pick(*depth)).map_err(invalid)?),
        BuilderDoc::Padic { p, depth } => Subject::Pro(towers::padic(*p, pick(*depth)).map_err(invalid)?),
        BuilderDoc::DirectSumTower { d, depth } => {
            Subject::Ind(towers::direct_sum_tower(*d, pick(*depth)).map_err(invalid)?)
        }
        BuilderDoc::ProductPro { d, depth } => Subject::Pro(towers::product_pro(*d, pick(*depth)).map_err(invalid)?),
        BuilderDoc::FactorialInd { depth } => Subject::Ind(towers::factorial_ind(pick(*depth)).map_err(invalid)?),
        BuilderDoc::SymmetricTower { depth } => {
            Subject::GroupTower(TowerOfGroups::symmetric(pick(*depth)).map_err(invalid)?)
        }
        BuilderDoc::ProductProGroup { group, depth } => {
            let g = finite_group(group)?;
            Subject::GroupTower(TowerOfGroups::product_pro(&g, pick(*depth)).map_err(invalid)?)
        }
    })
}

fn finite_group(doc: &GroupDoc) -> Result<FiniteGroup, CliError> {
    match doc {
        GroupDoc::Named(name) => FiniteGroup::by_name(name).map_err(invalid),
        GroupDoc::Table { name, table } => {
            FiniteGroup::new(name.clone().unwrap_or_else(|| "G".into()), table.clone()).map_err(invalid)
        }
    }
}

fn abelian(factors: &[u64]) -> Result<FiniteAbelianGroup, CliError> {
    FiniteAbelianGroup::new(factors.to_vec()).map_err(invalid)
}

/// Levels and transitions of an explicit abelian tower. Ind transitions go
/// from level n to n+1, pro transitions from n+1 to n.
fn abelian_tower(
    levels: &[Vec<u64>],
    transitions: &[Vec<Vec<i64>>],
    forward: bool,
) -> Result<(Vec<FiniteAbelianGroup>, Vec<Hom>), CliError> {
    let groups = levels
        .iter()
        .enumerate()
        .map(|(i, f)| abelian(f).map_err(|e| CliError::Validation(format!("level {}: {e}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    if transitions.len() + 1 != groups.len() {
        return Err(CliError::Validation(format!(
            "{} levels need {} transitions, found {}",
            groups.len(),
            groups.len().saturating_sub(1),
            transitions.len()
        )));
    }
    let homs = transitions
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let (s, t) = if forward { (i, i + 1) } else { (i + 1, i) };
            Hom::new(groups[s].clone(), groups[t].clone(), m)
                .map_err(|e| CliError::Validation(format!("transition at level {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((groups, homs))
}

fn validate_kind(k: &KindDoc, depth: Option<usize>) -> Result<Subject, CliError> {
    let no_depth = |kind: &str| match depth {
        Some(_) => Err(CliError::Validation(format!("--depth does not apply to a {kind} document"))),
        None => Ok(()),
    };
    Ok(match k {
        KindDoc::FiniteAbelian {
            invariant_factors,
            cyclic_orders,
        } => {
            no_depth("finite_abelian")?;
            match (invariant_factors, cyclic_orders) {
                (Some(f), None) => Subject::Abelian(abelian(f)?),
                (None, Some(o)) => Subject::Abelian(FiniteAbelianGroup::from_cyclic_orders(o).map_err(invalid)?),
                _ => {
                    return Err(CliError::Validation(
                        "finite_abelian needs exactly one of invariant_factors and cyclic_orders".into(),
                    ))
                }
            }
        }
        KindDoc::IndTower { levels, transitions } => {
            let (g, h) = abelian_tower(levels, transitions, true)?;
            let t = IndGroup::new(g, h).map_err(invalid)?;
            Subject::Ind(match depth {
                Some(d) => t.truncate(d).map_err(invalid)?,
                None => t,
            })
        }
        KindDoc::ProTower { levels, transitions } => {
            let (g, h) = abelian_tower(levels, transitions, false)?;
            let t = ProGroup::new(g, h).map_err(invalid)?;
            Subject::Pro(match depth {
                Some(d) => t.truncate(d).map_err(invalid)?,
                None => t,
            })
        }
        KindDoc::Function { tower, level, table } => {
            let Subject::Pro(t) = validate(tower, depth)? else {
                return Err(CliError::Validation("a function lives on a pro_tower".into()));
            };
            let values = table.iter().map(|v| v.0.clone()).collect();
            Subject::Function(LocallyConstantFunction::new(Arc::new(t), *level, values).map_err(invalid)?)
        }
        KindDoc::FiniteGroup { name, table } => {
            no_depth("finite_group")?;
            let doc = group_doc_from_parts(name.clone(), table.clone()).map_err(CliError::Validation)?;
            Subject::Group(finite_group(&doc)?)
        }
        KindDoc::Hopf {
            algebra,
            group,
            antipode,
            label,
        } => {
            no_depth("hopf")?;
            let g = finite_group(group)?;
            let mut h = match algebra {
                AlgebraKind::GroupAlgebra => group_algebra_hopf(&g),
                AlgebraKind::FunctionAlgebra => function_algebra_hopf(&g),
            };
            if let Some(a) = antipode {
                let m = match a {
                    AntipodeDoc::Named(n) if n == "identity" => Matrix::identity(h.dim()),
                    AntipodeDoc::Named(n) => {
                        return Err(CliError::Validation(format!("unknown antipode {n:?}; use \"identity\" or a matrix")))
                    }
                    AntipodeDoc::Matrix(rows) => {
                        if rows.len() != h.dim() || rows.iter().any(|r| r.len() != h.dim()) {
                            return Err(CliError::Validation(format!(
                                "antipode must be a {0} x {0} matrix",
                                h.dim()
                            )));
                        }
                        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect())
                    }
                };
                h = h.with_antipode(&m).map_err(invalid)?;
            }
            if let Some(l) = label {
                h = h.with_label(l.clone());
            }
            Subject::Hopf(h)
        }
        KindDoc::GroupTower {
            direction,
            levels,
            transitions,
        } => {
            let direction = Direction::from(*direction);
            let groups = levels
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    finite_group(g)
                        .map(Arc::new)
                        .map_err(|e| CliError::Validation(format!("level {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if transitions.len() + 1 != groups.len() {
                return Err(CliError::Validation(format!(
                    "{} levels need {} transitions, found {}",
                    groups.len(),
                    groups.len().saturating_sub(1),
                    transitions.len()
                )));
            }
            let maps = transitions
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let (s, t) = match direction {
                        Direction::Ind => (i, i + 1),
                        Direction::Pro => (i + 1, i),
                    };
                    GroupHom::new(Arc::clone(&groups[s]), Arc::clone(&groups[t]), m.clone())
                        .map_err(|e| CliError::Validation(format!("transition at level {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let t = TowerOfGroups::new(direction, groups, maps).map_err(invalid)?;
            Subject::GroupTower(match depth {
                Some(d) => t.truncate(d).map_err(invalid)?,
                None => t,
            })
        }
        KindDoc::HopfTower { construction, tower } => {
            let groups = group_tower(validate(tower, depth)?)?;
            let h = match construction {
                Construction::GroupAlgebra => ind_group_algebra(&groups),
                Construction::RestrictedFunctions => restriction_function_algebra(&groups),
                Construction::LocallyConstantFunctions => pro_function_algebra(&groups),
                Construction::ProfiniteConvolution => pro_group_algebra(&groups),
            };
            Subject::HopfTower(h.map_err(invalid)?)
        }
    })
}

/// Views an abelian or general group tower as a [`TowerOfGroups`].
pub fn group_tower(s: Subject) -> Result<TowerOfGroups, CliError> {
    match s {
        Subject::Ind(t) => TowerOfGroups::from_ind_group(&t).map_err(invalid),
        Subject::Pro(t) => TowerOfGroups::from_pro_group(&t).map_err(invalid),
        Subject::GroupTower(t) => Ok(t),
        other => Err(CliError::Validation(format!(
            "expected a tower of groups, found a {} document",
            other.kind()
        ))),
    }
}

/// The Hopf tower a bare group tower stands for: `C[G]` for ind-towers and
/// locally constant functions for pro-towers.
pub fn default_hopf_tower(t: &TowerOfGroups) -> Result<HopfTower, CliError> {
    match t.direction() {
        Direction::Ind => ind_group_algebra(t),
        Direction::Pro => pro_function_algebra(t),
    }
    .map_err(invalid)
}
