//! Text formats: algebra and module files, Tate tables, windows, monomial
//! lists and seeds.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{default_vars, Algebra, Ideal};
use crate::error::{Error, Result};
use crate::exactla::{Mat, PrimeField, Scalar};
use crate::homalg::{TateTable, MAX_DEGREE};
use crate::modrep::{Module, MAX_MODULE_DIM};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub char: u64,
}

/// An algebra file. Field order on output is `field`, `kind`, then the
/// kind-specific keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraFile {
    StructureConstants { field: FieldSpec, labels: Vec<String>, unit: Vec<i64>, mul: Vec<Vec<Vec<i64>>> },
    MonomialCi { field: FieldSpec, vars: Vec<String>, powers: Vec<u32> },
    /// Any monomial ideal containing a power of every variable.
    Monomial { field: FieldSpec, vars: Vec<String>, monomials: Vec<Vec<u32>> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureConstantsRepr {
    field: FieldSpec,
    kind: String,
    labels: Vec<String>,
    unit: Vec<i64>,
    mul: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialCiRepr {
    field: FieldSpec,
    kind: String,
    vars: Vec<String>,
    powers: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialRepr {
    field: FieldSpec,
    kind: String,
    vars: Vec<String>,
    monomials: Vec<Vec<u32>>,
}

const STRUCTURE_CONSTANTS: &str = "structure_constants";
const MONOMIAL_CI: &str = "monomial_ci";
const MONOMIAL: &str = "monomial";

fn syntax(source: &str, e: serde_json::Error) -> Error {
    Error::parse(format!("{source}:{}:{}", e.line(), e.column()), e.to_string())
}

fn from_value<T: DeserializeOwned>(source: &str, what: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::parse(format!("{source}: {what}"), e.to_string()))
}

fn kind_of<'a>(source: &str, v: &'a Value) -> Result<Option<&'a str>> {
    let Some(obj) = v.as_object() else {
        return Err(Error::parse(source, "expected a JSON object"));
    };
    match obj.get("kind") {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(Error::parse(format!("{source}: kind"), "expected a string")),
    }
}

impl AlgebraFile {
    pub fn parse(text: &str, source: &str) -> Result<AlgebraFile> {
        let v: Value = serde_json::from_str(text).map_err(|e| syntax(source, e))?;
        AlgebraFile::from_json(v, source)
    }

    fn from_json(v: Value, source: &str) -> Result<AlgebraFile> {
        match kind_of(source, &v)? {
            Some(STRUCTURE_CONSTANTS) => {
                let r: StructureConstantsRepr = from_value(source, STRUCTURE_CONSTANTS, v)?;
                Ok(AlgebraFile::StructureConstants { field: r.field, labels: r.labels, unit: r.unit, mul: r.mul })
            }
            Some(MONOMIAL_CI) => {
                let r: MonomialCiRepr = from_value(source, MONOMIAL_CI, v)?;
                Ok(AlgebraFile::MonomialCi { field: r.field, vars: r.vars, powers: r.powers })
            }
            Some(MONOMIAL) => {
                let r: MonomialRepr = from_value(source, MONOMIAL, v)?;
                Ok(AlgebraFile::Monomial { field: r.field, vars: r.vars, monomials: r.monomials })
            }
            Some(other) => Err(Error::parse(
                format!("{source}: kind"),
                format!("unknown algebra kind {other:?}; expected {STRUCTURE_CONSTANTS}, {MONOMIAL_CI} or {MONOMIAL}"),
            )),
            None => Err(Error::parse(format!("{source}: kind"), "missing field `kind`")),
        }
    }

    fn to_value(&self) -> Value {
        let repr = match self.clone() {
            AlgebraFile::StructureConstants { field, labels, unit, mul } => {
                serde_json::to_value(StructureConstantsRepr { field, kind: STRUCTURE_CONSTANTS.into(), labels, unit, mul })
            }
            AlgebraFile::MonomialCi { field, vars, powers } => {
                serde_json::to_value(MonomialCiRepr { field, kind: MONOMIAL_CI.into(), vars, powers })
            }
            AlgebraFile::Monomial { field, vars, monomials } => {
                serde_json::to_value(MonomialRepr { field, kind: MONOMIAL.into(), vars, monomials })
            }
        };
        repr.expect("algebra files serialize")
    }

    /// Single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(&self.to_value()).expect("algebra files serialize");
        out.push('\n');
        out
    }

    pub fn field(&self) -> &FieldSpec {
        match self {
            AlgebraFile::StructureConstants { field, .. }
            | AlgebraFile::MonomialCi { field, .. }
            | AlgebraFile::Monomial { field, .. } => field,
        }
    }

    /// Validates and constructs the algebra.
    pub fn build(&self) -> Result<Algebra> {
        let field = PrimeField::new(self.field().char)?;
        match self {
            AlgebraFile::StructureConstants { labels, unit, mul, .. } => {
                let reduce = |v: &[i64]| v.iter().map(|&x| field.reduce(x)).collect::<Vec<Scalar>>();
                let mul = mul.iter().map(|row| row.iter().map(|v| reduce(v)).collect()).collect();
                Algebra::from_structure_constants(field, labels.clone(), mul, reduce(unit))
            }
            AlgebraFile::MonomialCi { vars, powers, .. } => Algebra::monomial_complete_intersection(field, vars, powers),
            AlgebraFile::Monomial { vars, monomials, .. } => Algebra::monomial_quotient(field, vars, monomials),
        }
    }

    /// The structure-constant form of an algebra.
    pub fn from_algebra(a: &Algebra) -> AlgebraFile {
        let widen = |v: &[Scalar]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        AlgebraFile::StructureConstants {
            field: FieldSpec { char: a.field().characteristic() as u64 },
            labels: a.labels().to_vec(),
            unit: widen(a.unit()),
            mul: a.structure_constants().iter().map(|row| row.iter().map(|v| widen(v)).collect()).collect(),
        }
    }
}

pub fn parse_algebra(text: &str, source: &str) -> Result<Algebra> {
    AlgebraFile::parse(text, source)?.build()
}

/// Where a module file's algebra comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Path(String),
    Inline(AlgebraFile),
}

/// A module file: either explicit action matrices or a cyclic module `A/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleFile {
    Action { algebra: Option<AlgebraSource>, kdim: usize, action: Vec<Vec<Vec<i64>>> },
    Cyclic { algebra: Option<AlgebraSource>, ideal: Vec<Vec<i64>> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    algebra: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    kdim: usize,
    action: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclicRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    algebra: Option<Value>,
    kind: String,
    ideal: Vec<Vec<i64>>,
}

const ACTION: &str = "action";
const CYCLIC: &str = "cyclic";

fn algebra_source(source: &str, v: Option<Value>) -> Result<Option<AlgebraSource>> {
    match v {
        None => Ok(None),
        Some(Value::String(path)) => Ok(Some(AlgebraSource::Path(path))),
        Some(obj @ Value::Object(_)) => {
            Ok(Some(AlgebraSource::Inline(AlgebraFile::from_json(obj, &format!("{source}: algebra"))?)))
        }
        Some(_) => Err(Error::parse(format!("{source}: algebra"), "expected a path string or an algebra object")),
    }
}

fn algebra_value(a: &Option<AlgebraSource>) -> Option<Value> {
    a.as_ref().map(|a| match a {
        AlgebraSource::Path(p) => Value::String(p.clone()),
        AlgebraSource::Inline(f) => f.to_value(),
    })
}

impl ModuleFile {
    pub fn parse(text: &str, source: &str) -> Result<ModuleFile> {
        let v: Value = serde_json::from_str(text).map_err(|e| syntax(source, e))?;
        match kind_of(source, &v)? {
            None | Some(ACTION) => {
                let r: ActionRepr = from_value(source, "module", v)?;
                if r.kdim > MAX_MODULE_DIM {
                    return Err(Error::TooLarge(format!("module dimension {} > {MAX_MODULE_DIM}", r.kdim)));
                }
                Ok(ModuleFile::Action { algebra: algebra_source(source, r.algebra)?, kdim: r.kdim, action: r.action })
            }
            Some(CYCLIC) => {
                let r: CyclicRepr = from_value(source, CYCLIC, v)?;
                Ok(ModuleFile::Cyclic { algebra: algebra_source(source, r.algebra)?, ideal: r.ideal })
            }
            Some(other) => Err(Error::parse(
                format!("{source}: kind"),
                format!("unknown module kind {other:?}; expected {ACTION} or {CYCLIC}"),
            )),
        }
    }

    pub fn algebra(&self) -> Option<&AlgebraSource> {
        match self {
            ModuleFile::Action { algebra, .. } | ModuleFile::Cyclic { algebra, .. } => algebra.as_ref(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = match self {
            ModuleFile::Action { algebra, kdim, action } => serde_json::to_value(ActionRepr {
                algebra: algebra_value(algebra),
                kind: None,
                kdim: *kdim,
                action: action.clone(),
            }),
            ModuleFile::Cyclic { algebra, ideal } => serde_json::to_value(CyclicRepr {
                algebra: algebra_value(algebra),
                kind: CYCLIC.into(),
                ideal: ideal.clone(),
            }),
        };
        let mut out = serde_json::to_string(&v.expect("module files serialize")).expect("module files serialize");
        out.push('\n');
        out
    }

    /// Builds the module over `algebra`, which must be the file's algebra.
    pub fn build(&self, algebra: &Arc<Algebra>) -> Result<Module> {
        let f = algebra.field();
        let n = algebra.dim();
        match self {
            ModuleFile::Action { kdim, action, .. } => {
                if action.len() != n {
                    return Err(Error::Shape(format!("action has {} matrices, the algebra has dimension {n}", action.len())));
                }
                let mats = action
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        if rows.len() != *kdim || rows.iter().any(|r| r.len() != *kdim) {
                            return Err(Error::Shape(format!("action[{i}] must be {kdim}x{kdim}")));
                        }
                        let data = rows.iter().flatten().map(|&x| f.reduce(x)).collect::<Vec<_>>();
                        Ok(Mat::from_fn(f, *kdim, *kdim, |r, c| data[r * kdim + c]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Module::new(algebra, mats)
            }
            ModuleFile::Cyclic { ideal, .. } => {
                let gens = ideal
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        if g.len() != n {
                            return Err(Error::Shape(format!("ideal[{i}] must have {n} coordinates")));
                        }
                        Ok(g.iter().map(|&x| f.reduce(x)).collect())
                    })
                    .collect::<Result<Vec<Vec<Scalar>>>>()?;
                Module::cyclic(algebra, &Ideal::generated_by(algebra, &gens)?)
            }
        }
    }

    /// The explicit form of a module.
    pub fn from_module(m: &Module, algebra: Option<AlgebraSource>) -> ModuleFile {
        let action = m
            .action()
            .iter()
            .map(|a| (0..a.rows()).map(|r| a.row(r).iter().map(|&x| x as i64).collect()).collect())
            .collect();
        ModuleFile::Action { algebra, kdim: m.kdim(), action }
    }
}

/// Parses a module over a known algebra. A module file that names its own
/// algebra must name an equal one; paths are resolved through `load`.
pub fn parse_module(
    text: &str,
    source: &str,
    algebra: &Arc<Algebra>,
    load: impl Fn(&str) -> Result<Algebra>,
) -> Result<Module> {
    let file = ModuleFile::parse(text, source)?;
    let declared = match file.algebra() {
        None => None,
        Some(AlgebraSource::Path(p)) => Some(load(p)?),
        Some(AlgebraSource::Inline(f)) => Some(f.build()?),
    };
    if declared.is_some_and(|d| d != **algebra) {
        return Err(Error::AlgebraMismatch);
    }
    file.build(algebra)
}

/// Parses and validates a serialized Tate table.
pub fn parse_table(text: &str, source: &str) -> Result<TateTable> {
    let t: TateTable = serde_json::from_str(text).map_err(|e| syntax(source, e))?;
    if t.lo > t.hi || t.lo.abs() > MAX_DEGREE || t.hi.abs() > MAX_DEGREE {
        return Err(Error::parse(format!("{source}: lo/hi"), format!("invalid window {}:{}", t.lo, t.hi)));
    }
    if t.dims.len() as i64 != t.hi - t.lo + 1 {
        return Err(Error::parse(
            format!("{source}: dims"),
            format!("expected {} entries for window {}:{}, found {}", t.hi - t.lo + 1, t.lo, t.hi, t.dims.len()),
        ));
    }
    if let Some(p) = t.period {
        if p.p == 0 {
            return Err(Error::parse(format!("{source}: period"), "period must be positive"));
        }
    }
    Ok(t)
}

pub fn table_to_json(t: &TateTable) -> String {
    serde_json::to_string(t).expect("tables serialize")
}

/// `lo:hi`, both bounds inclusive.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let err = |m: &str| Error::parse("window", format!("{m} in {s:?}; expected lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(|| err("missing ':'"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| err("bad lower bound"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| err("bad upper bound"))?;
    if lo > hi {
        return Err(err("lower bound exceeds upper bound"));
    }
    if lo.abs() > MAX_DEGREE || hi.abs() > MAX_DEGREE {
        return Err(Error::InvalidDegree(format!("window {lo}:{hi} exceeds |degree| <= {MAX_DEGREE}")));
    }
    Ok((lo, hi))
}

/// Hex with or without a `0x` prefix.
pub fn parse_seed(s: &str) -> Result<u64> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|_| Error::parse("seed", format!("{s:?} is not a hexadecimal u64")))
}

/// Comma separated non-negative integers, e.g. `2,2`.
pub fn parse_list(s: &str, what: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::parse(what, format!("{t:?} is not a non-negative integer"))))
        .collect()
}

/// Comma separated variable names; defaults to `x, y, z, w, ..`.
pub fn parse_vars(s: Option<&str>, count: usize) -> Result<Vec<String>> {
    let Some(s) = s else { return Ok(default_vars(count)) };
    let vars: Vec<String> = s.split(',').map(|v| v.trim().to_string()).collect();
    for v in &vars {
        let mut chars = v.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric());
        if !ok || vars.iter().filter(|w| *w == v).count() > 1 {
            return Err(Error::parse("vars", format!("invalid or repeated variable {v:?}")));
        }
    }
    Ok(vars)
}

/// Monomials like `x^2,xy,y^3` or `x1^2*x2` as exponent vectors over `vars`.
/// Variable names are matched longest first so `x1` wins over `x`.
pub fn parse_monomials(s: &str, vars: &[String]) -> Result<Vec<Vec<u32>>> {
    let mut order: Vec<usize> = (0..vars.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(vars[i].len()));
    s.split(',')
        .map(|term| {
            let term = term.trim();
            let err = |m: &str| Error::parse("monomials", format!("{m} in {term:?}"));
            let mut exps = vec![0u32; vars.len()];
            let mut rest = term;
            if rest.is_empty() {
                return Err(err("empty monomial"));
            }
            while !rest.is_empty() {
                rest = rest.strip_prefix('*').unwrap_or(rest);
                let i = order
                    .iter()
                    .copied()
                    .find(|&i| rest.starts_with(vars[i].as_str()))
                    .ok_or_else(|| err("unknown variable"))?;
                rest = &rest[vars[i].len()..];
                let mut e = 1u32;
                if let Some(r) = rest.strip_prefix('^') {
                    let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                    e = r[..end].parse().map_err(|_| err("bad exponent"))?;
                    rest = &r[end..];
                }
                exps[i] = exps[i].checked_add(e).ok_or_else(|| err("exponent overflow"))?;
            }
            Ok(exps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: &str = r#"{"field":{"char":2},"kind":"monomial_ci","vars":["x","y"],"powers":[2,2]}"#;
    const DUAL_NUMBERS: &str =
        r#"{"field":{"char":2},"kind":"structure_constants","labels":["1","x"],"unit":[1,0],"mul":[[[1,0],[0,1]],[[0,1],[0,0]]]}"#;

    #[test]
    fn algebra_formats() {
        let b = parse_algebra(B, "B").unwrap();
        assert_eq!(b.dim(), 4);
        let a = parse_algebra(DUAL_NUMBERS, "A").unwrap();
        assert_eq!(a.labels(), ["1", "x"]);
        assert!(a.is_gorenstein());
        assert_eq!(AlgebraFile::parse(B, "B").unwrap().to_json().trim(), B);
        assert_eq!(AlgebraFile::from_algebra(&a).to_json().trim(), DUAL_NUMBERS);
        let sc = AlgebraFile::from_algebra(&b).to_json();
        assert_eq!(parse_algebra(&sc, "sc").unwrap(), b);
    }

    #[test]
    fn algebra_diagnostics() {
        let e = parse_algebra("{\"field\":{\"char\":2},\n\"kind\":", "f.json").unwrap_err();
        assert!(matches!(e, Error::Parse { ref location, .. } if location.starts_with("f.json:2:")), "{e}");
        let e = parse_algebra(r#"{"field":{"char":2},"kind":"monomial_ci","vars":["x"]}"#, "f").unwrap_err();
        assert!(e.to_string().contains("powers"), "{e}");
        let e = parse_algebra(r#"{"field":{"char":4},"kind":"monomial_ci","vars":["x"],"powers":[2]}"#, "f");
        assert_eq!(e.unwrap_err(), Error::InvalidField(4));
        let e = parse_algebra(r#"{"field":{"char":2},"kind":"ring"}"#, "f").unwrap_err();
        assert!(e.to_string().contains("unknown algebra kind"));
        let e = parse_algebra(r#"{"field":{"char":2},"kind":"monomial_ci","vars":["x"],"powers":[2],"extra":1}"#, "f");
        assert!(e.unwrap_err().to_string().contains("extra"));
        let e = parse_algebra(r#"{"field":{"char":2},"kind":"monomial_ci","vars":["x","x"],"powers":[2,2]}"#, "f");
        assert!(matches!(e.unwrap_err(), Error::InvalidPresentation(_)));
    }

    #[test]
    fn module_formats() {
        let b = Arc::new(parse_algebra(B, "B").unwrap());
        let load = |_: &str| parse_algebra(B, "B");
        let k = parse_module(r#"{"kind":"cyclic","ideal":[[0,1,0,0],[0,0,1,0]]}"#, "k", &b, load).unwrap();
        assert_eq!(k, Module::residue_field(&b));
        let file = ModuleFile::from_module(&k, Some(AlgebraSource::Path("B.json".into())));
        let text = file.to_json();
        assert!(text.starts_with(r#"{"algebra":"B.json","kdim":1,"action":"#), "{text}");
        assert_eq!(ModuleFile::parse(&text, "k").unwrap(), file);
        assert_eq!(parse_module(&text, "k", &b, load).unwrap(), k);
        let inline = ModuleFile::from_module(&k, Some(AlgebraSource::Inline(AlgebraFile::parse(B, "B").unwrap())));
        assert_eq!(parse_module(&inline.to_json(), "k", &b, load).unwrap(), k);
        let other = |_: &str| parse_algebra(DUAL_NUMBERS, "A");
        assert_eq!(parse_module(&text, "k", &b, other).unwrap_err(), Error::AlgebraMismatch);
        let bad = r#"{"kdim":1,"action":[[[1]],[[1]],[[0]],[[0]]]}"#;
        assert!(matches!(parse_module(bad, "m", &b, load).unwrap_err(), Error::ModuleAxiom(_)));
        let short = r#"{"kdim":1,"action":[[[1]]]}"#;
        assert!(matches!(parse_module(short, "m", &b, load).unwrap_err(), Error::Shape(_)));
    }

    #[test]
    fn tables_round_trip() {
        let text = r#"{"kind":"ext","lo":-1,"hi":1,"dims":[1,1,1],"period":{"p":1,"from":0}}"#;
        let t = parse_table(text, "t").unwrap();
        assert_eq!(table_to_json(&t), text);
        assert!(parse_table(r#"{"kind":"tor","lo":0,"hi":1,"dims":[1],"period":null}"#, "t").is_err());
        assert!(parse_table(r#"{"kind":"tor","lo":1,"hi":0,"dims":[],"period":null}"#, "t").is_err());
    }

    #[test]
    fn small_syntaxes() {
        assert_eq!(parse_window("-8:8").unwrap(), (-8, 8));
        assert!(parse_window("3:2").is_err());
        assert!(parse_window("8").is_err());
        assert!(parse_window("0:100000").is_err());
        assert_eq!(parse_seed("0xC0FFEE").unwrap(), 0xC0FFEE);
        assert_eq!(parse_seed("ff").unwrap(), 255);
        assert!(parse_seed("zz").is_err());
        assert_eq!(parse_list("2, 3", "powers").unwrap(), [2, 3]);
        let xy = default_vars(2);
        assert_eq!(parse_monomials("x^2,xy,y^2", &xy).unwrap(), [vec![2, 0], vec![1, 1], vec![0, 2]]);
        let v = parse_vars(Some("x,x1"), 2).unwrap();
        assert_eq!(parse_monomials("x1^3*x", &v).unwrap(), [vec![1, 3]]);
        assert!(parse_monomials("q", &xy).is_err());
        assert!(parse_monomials("x^", &xy).is_err());
        assert!(parse_vars(Some("x,x"), 2).is_err());
    }
}
