//! JSON file formats. Every file can reference another by relative path or embed it inline.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use workbench_core::algebra::{trivial, AlgebraError, AlgebraSpec, LocalAlgebra};
use workbench_core::dfield::{DField, DFieldError};
use workbench_core::frac::RatFunc;
use workbench_core::gamma::{CoeffTensor, GammaError, GammaSystem, OperatorAlgebras};
use workbench_core::groebner::GbConfig;
use workbench_core::index::OpIndex;
use workbench_core::kernel::{JetSpace, KernelEnv, KernelError};
use workbench_core::scalar::{Characteristic, Scalar};

/// A number or a string holding a scalar or an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    pub fn text(&self) -> String {
        match self {
            Literal::Int(n) => n.to_string(),
            Literal::Text(s) => s.clone(),
        }
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => Ok(Literal::Text(s)),
            Value::Number(n) => n
                .as_i64()
                .map(Literal::Int)
                .ok_or_else(|| serde::de::Error::custom("numbers must be integers; write fractions as strings")),
            other => Err(serde::de::Error::custom(format!("expected a number or string, found {}", other))),
        }
    }
}

impl From<&str> for Literal {
    fn from(s: &str) -> Literal {
        Literal::Text(s.into())
    }
}

/// Another file, by path relative to the referencing file, or inline.
#[derive(Clone, Debug, PartialEq)]
pub enum Ref<T> {
    Path(String),
    Inline(Box<T>),
}

impl<T: Serialize> Serialize for Ref<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ref::Path(p) => s.serialize_str(p),
            Ref::Inline(t) => t.serialize(s),
        }
    }
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for Ref<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => Ok(Ref::Path(s)),
            v @ Value::Object(_) => serde_json::from_value(v).map(|t| Ref::Inline(Box::new(t))).map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("expected a path or an object, found {}", other))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub p: usize,
    pub q: usize,
    #[serde(default)]
    pub coeffs: BTreeMap<usize, Literal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub char: u64,
    pub dim: usize,
    #[serde(default)]
    pub grades: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductEntry>,
}

/// A rational function field over the prime field; `lie` defaults to the one-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub char: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie: Option<Ref<AlgebraFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hs: Option<Ref<AlgebraFile>>,
    #[serde(default)]
    pub gens: Vec<String>,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, Literal>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub c: Literal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaFile {
    pub field: Ref<FieldFile>,
    #[serde(default)]
    pub lie: Vec<CoeffEntry>,
    #[serde(default)]
    pub hs: Vec<CoeffEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub gamma: Ref<GammaFile>,
    /// Must agree with the field of `gamma` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dfield: Option<Ref<FieldFile>>,
    pub n: usize,
    pub r: usize,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("PARSE_ERROR: {path}:{line}:{column}: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("PARSE_ERROR: {path}: field `{field}`: {msg}")]
    Field { path: String, field: String, msg: String },
    #[error("{path}: {err}")]
    Algebra { path: String, err: AlgebraError },
    #[error("{path}: {err}")]
    Gamma { path: String, err: GammaError },
    #[error("{path}: {err}")]
    DField { path: String, err: DFieldError },
    #[error("{path}: {err}")]
    Kernel { path: String, err: KernelError },
}

impl LoadError {
    pub fn code(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "IO_ERROR",
            LoadError::Json { .. } | LoadError::Field { .. } => "PARSE_ERROR",
            LoadError::Algebra { err, .. } => err.code(),
            LoadError::Gamma { err, .. } => match err {
                GammaError::Invalid(_) | GammaError::HsInCharZero => "PARSE_ERROR",
                GammaError::NotLieType { .. } => "NOT_LIE_TYPE",
                GammaError::Algebra(a) => a.code(),
            },
            LoadError::DField { err, .. } => match err {
                DFieldError::Invalid(_) => "PARSE_ERROR",
                e => e.code(),
            },
            LoadError::Kernel { err, .. } => err.code(),
        }
    }

    /// 2 for malformed input, 1 for data that parses but fails validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Kernel { err, .. } if !err.is_malformed() => 1,
            _ if self.code() == "PARSE_ERROR" || self.code() == "IO_ERROR" || self.code() == "INVALID" => 2,
            _ => 1,
        }
    }
}

fn field_err(path: &Path, field: impl fmt::Display, msg: impl fmt::Display) -> LoadError {
    LoadError::Field { path: path.display().to_string(), field: field.to_string(), msg: msg.to_string() }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_json(path, &src)
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, src: &str) -> Result<T, LoadError> {
    serde_json::from_str(src).map_err(|e| LoadError::Json {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

/// Which of the four formats a JSON document is, by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Algebra,
    Field,
    Gamma,
    Kernel,
}

impl FileKind {
    pub fn detect(v: &Value) -> Option<FileKind> {
        let o = v.as_object()?;
        if o.contains_key("relations") || o.contains_key("n") {
            Some(FileKind::Kernel)
        } else if o.contains_key("field") {
            Some(FileKind::Gamma)
        } else if o.contains_key("dim") {
            Some(FileKind::Algebra)
        } else if o.contains_key("char") {
            Some(FileKind::Field)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FileKind::Algebra => "algebra",
            FileKind::Field => "dfield",
            FileKind::Gamma => "gamma",
            FileKind::Kernel => "kernel",
        }
    }
}

fn characteristic(path: &Path, c: u64) -> Result<Characteristic, LoadError> {
    Characteristic::new(c).ok_or_else(|| field_err(path, "char", format!("{} is neither 0 nor a prime", c)))
}

/// Resolves references relative to the file being read.
#[derive(Clone, Debug)]
pub struct Loader {
    path: PathBuf,
}

impl Loader {
    pub fn new(path: impl Into<PathBuf>) -> Loader {
        Loader { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn child<T: DeserializeOwned>(&self, r: &Ref<T>) -> Result<(Loader, T), LoadError>
    where
        T: Clone,
    {
        match r {
            Ref::Path(p) => {
                let dir = self.path.parent().unwrap_or(Path::new("."));
                let full = dir.join(p);
                let t = read_json(&full)?;
                Ok((Loader::new(full), t))
            }
            Ref::Inline(t) => Ok((self.clone(), (**t).clone())),
        }
    }

    fn display(&self) -> String {
        self.path.display().to_string()
    }

    pub fn algebra(&self, f: &AlgebraFile) -> Result<LocalAlgebra, LoadError> {
        let p = &self.path;
        let ch = characteristic(p, f.char)?;
        if f.dim == 0 {
            return Err(field_err(p, "dim", "dimension must be at least 1"));
        }
        let mut products = Vec::new();
        for (k, e) in f.products.iter().enumerate() {
            let mut coeffs = Vec::new();
            for (i, c) in &e.coeffs {
                let s = Scalar::parse(ch, &c.text())
                    .map_err(|err| field_err(p, format!("products[{}].coeffs.{}", k, i), err))?;
                coeffs.push((*i, s));
            }
            products.push((e.p, e.q, coeffs));
        }
        let spec = AlgebraSpec { characteristic: ch, m: f.dim - 1, grades: f.grades.clone(), products };
        LocalAlgebra::validate(&spec).map_err(|err| LoadError::Algebra { path: self.display(), err })
    }

    pub fn algebra_ref(&self, r: &Ref<AlgebraFile>) -> Result<LocalAlgebra, LoadError> {
        let (l, f) = self.child(r)?;
        l.algebra(&f)
    }

    pub fn field(&self, f: &FieldFile) -> Result<DField, LoadError> {
        let p = &self.path;
        let ch = characteristic(p, f.char)?;
        let lie = match &f.lie {
            Some(r) => self.algebra_ref(r)?,
            None => trivial(ch),
        };
        let hs = f.hs.as_ref().map(|r| self.algebra_ref(r)).transpose()?;
        for (key, a) in [("lie", Some(&lie)), ("hs", hs.as_ref())] {
            if let Some(a) = a {
                if a.characteristic() != ch {
                    return Err(field_err(p, key, "algebra characteristic differs from the field"));
                }
            }
        }
        let algebras = OperatorAlgebras::new(lie, hs).map_err(|err| LoadError::Gamma { path: self.display(), err })?;
        let dferr = |err| LoadError::DField { path: self.display(), err };
        let bare = DField::new(algebras.clone(), f.gens.clone(), &[]).map_err(dferr)?;
        let mut values = Vec::new();
        for (g, ops) in &f.action {
            let gi = f
                .gens
                .iter()
                .position(|x| x == g)
                .ok_or_else(|| field_err(p, format!("action.{}", g), "not a declared generator"))?;
            for (op, v) in ops {
                let at = || format!("action.{}.{}", g, op);
                let o = OpIndex::parse(op).map_err(|e| field_err(p, at(), e))?;
                let x = bare.parse(&v.text()).map_err(|e| field_err(p, at(), e))?;
                values.push((gi, o, x));
            }
        }
        DField::new(algebras, f.gens.clone(), &values).map_err(dferr)
    }

    pub fn field_ref(&self, r: &Ref<FieldFile>) -> Result<DField, LoadError> {
        let (l, f) = self.child(r)?;
        l.field(&f)
    }

    pub fn gamma(&self, f: &GammaFile) -> Result<(DField, GammaSystem), LoadError> {
        let field = self.field_ref(&f.field)?;
        let p = &self.path;
        let tensor = |key: &str, entries: &[CoeffEntry]| -> Result<CoeffTensor, LoadError> {
            let mut t = CoeffTensor::new();
            for (k, e) in entries.iter().enumerate() {
                let x = field.parse(&e.c.text()).map_err(|err| field_err(p, format!("{}[{}].c", key, k), err))?;
                if t.get(e.l, e.i, e.j).is_some() {
                    return Err(field_err(p, format!("{}[{}]", key, k), "entry listed twice"));
                }
                t.set(e.l, e.i, e.j, x);
            }
            Ok(t)
        };
        let lie = tensor("lie", &f.lie)?;
        let hs = tensor("hs", &f.hs)?;
        let g = GammaSystem::new(field.algebras().clone(), lie, hs)
            .map_err(|err| LoadError::Gamma { path: self.display(), err })?;
        Ok((field, g))
    }

    pub fn gamma_ref(&self, r: &Ref<GammaFile>) -> Result<(DField, GammaSystem), LoadError> {
        let (l, f) = self.child(r)?;
        l.gamma(&f)
    }

    pub fn kernel(&self, f: &KernelFile) -> Result<KernelSetup, LoadError> {
        let (field, gamma) = self.gamma_ref(&f.gamma)?;
        if let Some(d) = &f.dfield {
            if self.field_ref(d)? != field {
                return Err(field_err(&self.path, "dfield", "differs from the field of the commutation system"));
            }
        }
        if f.n == 0 {
            return Err(field_err(&self.path, "n", "a kernel needs at least one variable"));
        }
        Ok(KernelSetup { field, gamma, n: f.n, r: f.r, relations: f.relations.clone(), path: self.display() })
    }
}

pub fn load_algebra(path: &Path) -> Result<LocalAlgebra, LoadError> {
    Loader::new(path).algebra(&read_json(path)?)
}

pub fn load_field(path: &Path) -> Result<DField, LoadError> {
    Loader::new(path).field(&read_json(path)?)
}

pub fn load_gamma(path: &Path) -> Result<(DField, GammaSystem), LoadError> {
    Loader::new(path).gamma(&read_json(path)?)
}

pub fn load_kernel(path: &Path) -> Result<KernelSetup, LoadError> {
    Loader::new(path).kernel(&read_json(path)?)
}

/// Everything needed to build a kernel; the kernel itself borrows from this.
pub struct KernelSetup {
    pub field: DField,
    pub gamma: GammaSystem,
    pub n: usize,
    pub r: usize,
    pub relations: Vec<String>,
    pub path: String,
}

impl KernelSetup {
    pub fn env(&self, cfg: GbConfig) -> Result<KernelEnv<'_>, LoadError> {
        KernelEnv::new(&self.field, &self.gamma, cfg).map_err(|err| self.err(err))
    }

    pub fn err(&self, err: KernelError) -> LoadError {
        LoadError::Kernel { path: self.path.clone(), err }
    }
}

// --- serialization of loaded objects -----------------------------------------------------------

pub fn algebra_file(a: &LocalAlgebra) -> AlgebraFile {
    let mut products = Vec::new();
    for p in 1..=a.m() {
        for q in 1..=a.m() {
            let cell = a.product(p, q);
            if !cell.is_empty() {
                let coeffs = cell.iter().map(|(i, c)| (*i, Literal::Text(c.to_literal()))).collect();
                products.push(ProductEntry { p, q, coeffs });
            }
        }
    }
    AlgebraFile { char: a.characteristic().value(), dim: a.dim(), grades: a.grades().to_vec(), products }
}

/// The field with its algebras inline.
pub fn field_file(f: &DField) -> FieldFile {
    let algs = f.algebras();
    let lie = (algs.lie.m() > 0).then(|| Ref::Inline(Box::new(algebra_file(&algs.lie))));
    let hs = algs.hs.as_ref().map(|h| Ref::Inline(Box::new(algebra_file(h))));
    FieldFile { char: f.characteristic().value(), lie, hs, gens: f.gens().to_vec(), action: action_map(f) }
}

fn action_map(f: &DField) -> BTreeMap<String, BTreeMap<String, Literal>> {
    let mut action = BTreeMap::new();
    for (g, name) in f.gens().iter().enumerate() {
        let mut ops = BTreeMap::new();
        for op in f.opset().ops() {
            let v = f.action(g, op);
            if !workbench_core::ring::Ring::is_zero(v) {
                ops.insert(op.to_string(), Literal::Text(f.render(v)));
            }
        }
        if !ops.is_empty() {
            action.insert(name.clone(), ops);
        }
    }
    action
}

fn coeff_entries(f: &DField, t: &CoeffTensor) -> Vec<CoeffEntry> {
    let mut v: Vec<CoeffEntry> = t
        .entries()
        .filter(|(_, c)| !workbench_core::ring::Ring::is_zero(*c))
        .map(|(&(i, j, l), c)| CoeffEntry { i, j, l, c: Literal::Text(f.render(c)) })
        .collect();
    v.sort_by_key(|e| (e.i, e.j, e.l));
    v
}

pub fn gamma_file(f: &DField, g: &GammaSystem) -> GammaFile {
    GammaFile { field: Ref::Inline(Box::new(field_file(f))), lie: coeff_entries(f, &g.lie), hs: coeff_entries(f, &g.hs) }
}

pub fn rf_literal(f: &DField, x: &RatFunc) -> String {
    f.render(x)
}

// --- canonical forms -----------------------------------------------------------------------------

/// Canonical form of a file: references kept as written, inline parts and values normalised.
pub struct Canon {
    cfg: GbConfig,
}

impl Canon {
    pub fn new(cfg: GbConfig) -> Canon {
        Canon { cfg }
    }

    pub fn any(&self, path: &Path, v: &Value) -> Result<Value, LoadError> {
        let kind = FileKind::detect(v).ok_or_else(|| field_err(path, "<root>", "not an algebra, field, gamma or kernel file"))?;
        let l = Loader::new(path);
        let out = match kind {
            FileKind::Algebra => serde_json::to_value(self.algebra(&l, &from_value(path, v)?)?),
            FileKind::Field => serde_json::to_value(self.field(&l, &from_value(path, v)?)?),
            FileKind::Gamma => serde_json::to_value(self.gamma(&l, &from_value(path, v)?)?),
            FileKind::Kernel => serde_json::to_value(self.kernel(&l, &from_value(path, v)?)?),
        };
        Ok(out.expect("serializable"))
    }

    fn algebra_ref(&self, l: &Loader, r: &Ref<AlgebraFile>) -> Result<Ref<AlgebraFile>, LoadError> {
        match r {
            Ref::Path(_) => {
                l.algebra_ref(r)?;
                Ok(r.clone())
            }
            Ref::Inline(f) => Ok(Ref::Inline(Box::new(self.algebra(l, f)?))),
        }
    }

    pub fn algebra(&self, l: &Loader, f: &AlgebraFile) -> Result<AlgebraFile, LoadError> {
        Ok(algebra_file(&l.algebra(f)?))
    }

    fn field_ref(&self, l: &Loader, r: &Ref<FieldFile>) -> Result<Ref<FieldFile>, LoadError> {
        match r {
            Ref::Path(_) => {
                l.field_ref(r)?;
                Ok(r.clone())
            }
            Ref::Inline(f) => Ok(Ref::Inline(Box::new(self.field(l, f)?))),
        }
    }

    pub fn field(&self, l: &Loader, f: &FieldFile) -> Result<FieldFile, LoadError> {
        let d = l.field(f)?;
        Ok(FieldFile {
            char: f.char,
            lie: f.lie.as_ref().map(|r| self.algebra_ref(l, r)).transpose()?,
            hs: f.hs.as_ref().map(|r| self.algebra_ref(l, r)).transpose()?,
            gens: f.gens.clone(),
            action: action_map(&d),
        })
    }

    fn gamma_ref(&self, l: &Loader, r: &Ref<GammaFile>) -> Result<Ref<GammaFile>, LoadError> {
        match r {
            Ref::Path(_) => {
                l.gamma_ref(r)?;
                Ok(r.clone())
            }
            Ref::Inline(f) => Ok(Ref::Inline(Box::new(self.gamma(l, f)?))),
        }
    }

    pub fn gamma(&self, l: &Loader, f: &GammaFile) -> Result<GammaFile, LoadError> {
        let (d, g) = l.gamma(f)?;
        Ok(GammaFile { field: self.field_ref(l, &f.field)?, lie: coeff_entries(&d, &g.lie), hs: coeff_entries(&d, &g.hs) })
    }

    pub fn kernel(&self, l: &Loader, f: &KernelFile) -> Result<KernelFile, LoadError> {
        let setup = l.kernel(f)?;
        let env = setup.env(self.cfg)?;
        let space = JetSpace::new(env.ops(), f.n, f.r);
        let relations = f
            .relations
            .iter()
            .map(|s| env.parse_relation(&space, s).map(|p| env.render(&space, &p)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| setup.err(e))?;
        Ok(KernelFile {
            gamma: self.gamma_ref(l, &f.gamma)?,
            dfield: f.dfield.as_ref().map(|r| self.field_ref(l, r)).transpose()?,
            n: f.n,
            r: f.r,
            relations,
        })
    }
}

fn from_value<T: DeserializeOwned>(path: &Path, v: &Value) -> Result<T, LoadError> {
    serde_json::from_value(v.clone()).map_err(|e| field_err(path, "<root>", e))
}

pub fn to_pretty<T: Serialize>(t: &T) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("serializable");
    s.push('\n');
    s
}
