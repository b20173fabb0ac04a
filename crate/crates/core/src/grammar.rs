//! Text grammar for sequences, weight functions, systems, test functions,
//! models and spaces, plus `name = spec` config files.

use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::functions::BmtWeightFunction;
use crate::sequences::WeightSequence;
use crate::spaces::{BanachSpaceModel, GridSpec, ModelKind, Profile};
use crate::systems::{Kind, WeightFunctionSystem, WeightSequenceSystem};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Syntax tree: `name`, `name(args)`, `name:[items]`, `(items)` or a number.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number { value: f64, pos: Pos },
    Call { name: String, args: Vec<Arg>, list: Option<Vec<Node>>, pos: Pos },
    Tuple { items: Vec<Node>, pos: Pos },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Node {
    fn pos(&self) -> Pos {
        match self {
            Node::Number { pos, .. } | Node::Call { pos, .. } | Node::Tuple { pos, .. } => *pos,
        }
    }
}

fn err_at(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

struct Parser {
    chars: Vec<char>,
    at: usize,
    line: usize,
}

impl Parser {
    fn new(src: &str, line: usize) -> Self {
        Parser { chars: src.chars().collect(), at: 0, line }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.at + 1 }
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].is_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.at += 1;
                Ok(())
            }
            Some(d) => Err(err_at(self.pos(), format!("expected `{c}`, found `{d}`"))),
            None => Err(err_at(self.pos(), format!("expected `{c}`, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        let start = self.at;
        while self.at < self.chars.len() {
            let c = self.chars[self.at];
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '+' | '/') {
                self.at += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.at].iter().collect()
    }

    fn node(&mut self) -> Result<Node> {
        let pos = match self.peek() {
            Some(_) => self.pos(),
            None => return Err(err_at(self.pos(), "unexpected end of input")),
        };
        if self.peek() == Some('(') {
            self.at += 1;
            let items = self.items(')')?;
            return Ok(Node::Tuple { items, pos });
        }
        let w = self.word();
        if w.is_empty() {
            return Err(err_at(pos, format!("unexpected `{}`", self.chars[self.at])));
        }
        if let Some(value) = parse_number(&w) {
            return Ok(Node::Number { value, pos });
        }
        if !w.chars().next().is_some_and(|c| c.is_alphabetic()) {
            return Err(err_at(pos, format!("malformed token `{w}`")));
        }
        let mut args = Vec::new();
        let mut list = None;
        // no whitespace is skipped here: `name (` is not a call
        if self.chars.get(self.at) == Some(&'(') {
            self.at += 1;
            args = self.args()?;
        }
        if self.chars.get(self.at) == Some(&':') {
            self.at += 1;
            self.expect('[')?;
            list = Some(self.items(']')?);
        }
        Ok(Node::Call { name: w.to_ascii_lowercase(), args, list, pos })
    }

    fn items(&mut self, close: char) -> Result<Vec<Node>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.at += 1;
            return Ok(out);
        }
        loop {
            out.push(self.node()?);
            match self.peek() {
                Some(',') => self.at += 1,
                Some(c) if c == close => {
                    self.at += 1;
                    return Ok(out);
                }
                _ => return Err(err_at(self.pos(), format!("expected `,` or `{close}`"))),
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut out = Vec::new();
        if self.peek() == Some(')') {
            self.at += 1;
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let save = self.at;
            let w = self.word();
            let key = if !w.is_empty() && self.peek() == Some('=') {
                self.at += 1;
                Some(w.to_ascii_lowercase())
            } else {
                self.at = save;
                None
            };
            out.push(Arg { key, value: self.node()? });
            match self.peek() {
                Some(',') => self.at += 1,
                Some(')') => {
                    self.at += 1;
                    return Ok(out);
                }
                _ => return Err(err_at(self.pos(), "expected `,` or `)`")),
            }
        }
    }

    fn finish(mut self, node: Node) -> Result<Node> {
        match self.peek() {
            None => Ok(node),
            Some(c) => Err(err_at(self.pos(), format!("trailing input starting at `{c}`"))),
        }
    }
}

/// Decimal, `a/b`, or `inf`.
fn parse_number(w: &str) -> Option<f64> {
    match w.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => return Some(f64::INFINITY),
        _ => {}
    }
    if !w.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.') {
        return None;
    }
    if let Some((a, b)) = w.split_once('/') {
        let (a, b): (f64, f64) = (a.parse().ok()?, b.parse().ok()?);
        return (b != 0.0).then_some(a / b);
    }
    w.parse().ok()
}

/// Parses one spec into a syntax tree; `line` is used in error positions.
pub fn parse_node(src: &str, line: usize) -> Result<Node> {
    let mut p = Parser::new(src, line);
    let n = p.node()?;
    p.finish(n)
}

// --- tree accessors ---------------------------------------------------------

struct Call<'a> {
    name: &'a str,
    args: &'a [Arg],
    list: Option<&'a [Node]>,
    pos: Pos,
}

fn call<'a>(n: &'a Node, what: &str) -> Result<Call<'a>> {
    match n {
        Node::Call { name, args, list, pos } => Ok(Call { name, args, list: list.as_deref(), pos: *pos }),
        other => Err(err_at(other.pos(), format!("expected a {what}"))),
    }
}

impl<'a> Call<'a> {
    fn named(&self, key: &str) -> Option<&'a Node> {
        self.args.iter().find(|a| a.key.as_deref() == Some(key)).map(|a| &a.value)
    }

    fn positional(&self, k: usize) -> Option<&'a Node> {
        self.args.iter().filter(|a| a.key.is_none()).nth(k).map(|a| &a.value)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for a in self.args {
            if let Some(k) = &a.key {
                if !allowed.contains(&k.as_str()) {
                    return Err(err_at(a.value.pos(), format!("`{}` takes no argument `{k}`", self.name)));
                }
            }
        }
        Ok(())
    }

    fn number(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.named(key) {
            Some(n) => number(n),
            None => default.ok_or_else(|| err_at(self.pos, format!("`{}` needs `{key}=`", self.name))),
        }
    }

    fn required(&self, k: usize, what: &str) -> Result<&'a Node> {
        self.positional(k).ok_or_else(|| err_at(self.pos, format!("`{}` needs a {what}", self.name)))
    }

    fn items(&self) -> Result<&'a [Node]> {
        self.list.ok_or_else(|| err_at(self.pos, format!("`{}` needs a `:[...]` list", self.name)))
    }
}

fn number(n: &Node) -> Result<f64> {
    match n {
        Node::Number { value, .. } => Ok(*value),
        other => Err(err_at(other.pos(), "expected a number")),
    }
}

fn tuple<'a>(n: &'a Node, len: &[usize]) -> Result<&'a [Node]> {
    match n {
        Node::Tuple { items, .. } if len.contains(&items.len()) => Ok(items),
        other => Err(err_at(other.pos(), format!("expected a tuple of {len:?} entries"))),
    }
}

fn located(pos: Pos, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => err_at(pos, other.to_string()),
    }
}

// --- interpretations --------------------------------------------------------

/// `gevrey(s=0.5,h=1)`, `table:[1,1,2,6]`, `tensor(<seq>,<seq>)`,
/// `bmt(<ω>,lambda=1)`, `dilate(<seq>,lambda=2)`.
pub fn sequence(n: &Node, dim: usize, hz: &Horizons) -> Result<WeightSequence> {
    let c = call(n, "sequence spec")?;
    let built = match c.name {
        "gevrey" => {
            c.check_keys(&["s", "h"])?;
            WeightSequence::gevrey(dim, c.number("s", None)?, c.number("h", Some(1.0))?)
        }
        "table" => {
            let vals = c.items()?.iter().map(number).collect::<Result<Vec<_>>>()?;
            WeightSequence::table(dim, &vals)
        }
        "tensor" => {
            let factors = c.args.iter().map(|a| sequence(&a.value, 1, hz)).collect::<Result<Vec<_>>>()?;
            if factors.len() != dim {
                return Err(err_at(c.pos, format!("tensor has {} factors but the dimension is {dim}", factors.len())));
            }
            WeightSequence::tensor(factors)
        }
        "bmt" => {
            c.check_keys(&["lambda"])?;
            let omega = Arc::new(weight_function(c.required(0, "weight function")?)?);
            let lambda = c.number("lambda", Some(1.0))?;
            crate::functions::sequence_from_bmt(dim, &omega, lambda, hz.q_max)
        }
        "dilate" => {
            c.check_keys(&["lambda"])?;
            WeightSequence::dilated(sequence(c.required(0, "sequence")?, dim, hz)?, c.number("lambda", None)?)
        }
        other => return Err(err_at(c.pos, format!("unknown sequence `{other}`"))),
    };
    built.map(|m| m.with_q_max(hz.q_max)).map_err(|e| located(c.pos, e))
}

/// `pow(rho=0.5)`, `logpow(a=2)`, `phi-table:[(0,0),(1,1),...]`.
pub fn weight_function(n: &Node) -> Result<BmtWeightFunction> {
    let c = call(n, "weight function spec")?;
    let built = match c.name {
        "pow" => {
            c.check_keys(&["rho"])?;
            BmtWeightFunction::power_minus_one(c.number("rho", None)?)
        }
        "logpow" => {
            c.check_keys(&["a"])?;
            BmtWeightFunction::log_power(c.number("a", None)?)
        }
        "phi-table" => {
            let pts = c
                .items()?
                .iter()
                .map(|t| tuple(t, &[2]).and_then(|p| Ok((number(&p[0])?, number(&p[1])?))))
                .collect::<Result<Vec<_>>>()?;
            BmtWeightFunction::sampled(&pts)
        }
        other => return Err(err_at(c.pos, format!("unknown weight function `{other}`"))),
    };
    built.map_err(|e| located(c.pos, e))
}

/// `dilated(<seq>)`, `frombmt(<ω>)`, `explicit:[(λ,<seq>),...]`.
pub fn sequence_system(n: &Node, dim: usize, hz: &Horizons) -> Result<WeightSequenceSystem> {
    let c = call(n, "sequence system spec")?;
    let built = match c.name {
        "dilated" => WeightSequenceSystem::dilated(sequence(c.required(0, "sequence")?, dim, hz)?, hz),
        "frombmt" => WeightSequenceSystem::from_bmt(dim, Arc::new(weight_function(c.required(0, "weight function")?)?), hz),
        "explicit" => {
            let members = c
                .items()?
                .iter()
                .map(|t| tuple(t, &[2]).and_then(|p| Ok((number(&p[0])?, sequence(&p[1], dim, hz)?))))
                .collect::<Result<Vec<_>>>()?;
            WeightSequenceSystem::explicit(members, hz)
        }
        other => return Err(err_at(c.pos, format!("unknown sequence system `{other}`"))),
    };
    built.map_err(|e| located(c.pos, e))
}

/// `dilated(<seq>)`, `fromomega(<ω>)`, `assoc(<seq-system>)`,
/// `polyshift(k=2,<fun-system>)`.
pub fn function_system(n: &Node, dim: usize, hz: &Horizons) -> Result<WeightFunctionSystem> {
    let c = call(n, "function system spec")?;
    let built = match c.name {
        "dilated" => WeightFunctionSystem::dilated(sequence(c.required(0, "sequence")?, dim, hz)?, hz),
        "fromomega" => WeightFunctionSystem::from_omega(dim, Arc::new(weight_function(c.required(0, "weight function")?)?), hz),
        "assoc" => WeightFunctionSystem::from_sequence_system(sequence_system(c.required(0, "sequence system")?, dim, hz)?, hz),
        "polyshift" => {
            c.check_keys(&["k"])?;
            WeightFunctionSystem::poly_shift_all(c.number("k", None)?, function_system(c.required(0, "system")?, dim, hz)?, hz)
        }
        other => return Err(err_at(c.pos, format!("unknown function system `{other}`"))),
    };
    built.map_err(|e| located(c.pos, e))
}

/// `gaussian(a=1)`, `sinc`, `bump(deg=8,r=1)`, `trig:[(k,coef),...]` with
/// `coef` real or `(k,re,im)`.
pub fn test_profile(n: &Node) -> Result<Profile> {
    let c = call(n, "function spec")?;
    let built = match c.name {
        "gaussian" => {
            c.check_keys(&["a"])?;
            Profile::gaussian(c.number("a", Some(1.0))?)
        }
        "sinc" => Ok(Profile::Sinc),
        "bump" => {
            c.check_keys(&["deg", "r"])?;
            let deg = c.number("deg", Some(8.0))?;
            if deg.fract() != 0.0 || deg < 1.0 {
                return Err(err_at(c.pos, format!("bump degree must be a positive integer, got {deg}")));
            }
            Profile::bump(deg as usize, c.number("r", Some(1.0))?)
        }
        "trig" => {
            let terms = c
                .items()?
                .iter()
                .map(|t| {
                    let p = tuple(t, &[2, 3])?;
                    let k = number(&p[0])?;
                    if k.fract() != 0.0 {
                        return Err(err_at(p[0].pos(), "frequency must be an integer"));
                    }
                    let im = if p.len() == 3 { number(&p[2])? } else { 0.0 };
                    Ok((k as i64, Complex64::new(number(&p[1])?, im)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Profile::trig(terms))
        }
        other => return Err(err_at(c.pos, format!("unknown function `{other}`"))),
    };
    built.map_err(|e| located(c.pos, e))
}

/// Model kind from `lp(p=2)`, `l0`, `mixed(p1=1,p2=2)`.
pub fn model_kind(n: &Node) -> Result<ModelKind> {
    let c = call(n, "model spec")?;
    match c.name {
        "lp" => {
            c.check_keys(&["p"])?;
            model_from_p(c.number("p", None)?).map_err(|e| located(c.pos, e))
        }
        "l0" => Ok(ModelKind::L0),
        "mixed" => {
            c.check_keys(&["p1", "p2"])?;
            Ok(ModelKind::Mixed { p1: c.number("p1", None)?, p2: c.number("p2", None)? })
        }
        other => Err(err_at(c.pos, format!("unknown model `{other}`"))),
    }
}

/// `p = 0` selects the vanishing-tail model.
pub fn model_from_p(p: f64) -> Result<ModelKind> {
    if p == 0.0 {
        Ok(ModelKind::L0)
    } else if p >= 1.0 {
        Ok(ModelKind::Lp(p))
    } else {
        Err(Error::InvalidInput(format!("p must be 0 or >= 1, got {p}")))
    }
}

fn model_string(k: ModelKind) -> String {
    let num = |p: f64| if p.is_infinite() { "inf".to_string() } else { format!("{p}") };
    match k {
        ModelKind::Lp(p) => format!("lp(p={})", num(p)),
        ModelKind::L0 => "l0".into(),
        ModelKind::Mixed { p1, p2 } => format!("mixed(p1={},p2={})", num(p1), num(p2)),
    }
}

/// A space `E^{[M]}_{[W]}`: kind, both systems and the model.
#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub kind: Kind,
    pub dim: usize,
    pub seq: WeightSequenceSystem,
    pub fun: WeightFunctionSystem,
    pub model: ModelKind,
}

/// Fallbacks for fields a space spec leaves out (from CLI flags).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceDefaults {
    pub kind: Option<Kind>,
    pub model: ModelKind,
}

impl Default for SpaceDefaults {
    fn default() -> Self {
        SpaceDefaults { kind: None, model: ModelKind::Lp(2.0) }
    }
}

impl SpaceSpec {
    pub fn model(&self) -> Result<BanachSpaceModel> {
        let grid = GridSpec::default_for(self.dim)?;
        match self.model {
            ModelKind::Lp(p) => BanachSpaceModel::lp(p, grid),
            ModelKind::L0 => Ok(BanachSpaceModel::l0(grid)),
            ModelKind::Mixed { p1, p2 } => BanachSpaceModel::mixed(p1, p2, grid),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "space(kind={},", self.kind)?;
        if self.dim != 1 {
            write!(f, "dim={},", self.dim)?;
        }
        write!(f, "seq={},fun={},model={})", self.seq.spec_string(), self.fun.spec_string(), model_string(self.model))
    }
}

/// `space(kind=..,seq=..,fun=..,model=..,dim=1)`, `gs(s=..,t=..,h=..)` or
/// `bb(omega=..,eta=..)`; missing kind and model come from `defaults`.
pub fn space(n: &Node, defaults: SpaceDefaults, hz: &Horizons) -> Result<SpaceSpec> {
    let c = call(n, "space spec")?;
    let dim = match c.named("dim") {
        Some(d) => {
            let v = number(d)?;
            if v.fract() != 0.0 || !(1.0..=2.0).contains(&v) {
                return Err(err_at(d.pos(), "dim must be 1 or 2"));
            }
            v as usize
        }
        None => 1,
    };
    let kind = match c.named("kind") {
        Some(k) => match call(k, "kind")? {
            Call { name, pos, .. } => Kind::parse(name).map_err(|e| located(pos, e))?,
        },
        None => defaults
            .kind
            .ok_or_else(|| err_at(c.pos, "no kind given (use kind= or --kind)"))?,
    };
    let model = match c.named("model") {
        Some(m) => model_kind(m)?,
        None => match c.named("p") {
            Some(p) => model_from_p(number(p)?).map_err(|e| located(p.pos(), e))?,
            None => defaults.model,
        },
    };
    let common = ["kind", "model", "p", "dim"];
    let (seq, fun) = match c.name {
        "space" => {
            c.check_keys(&[&common[..], &["seq", "fun"]].concat())?;
            let need = |k: &str| c.named(k).ok_or_else(|| err_at(c.pos, format!("`space` needs `{k}=`")));
            (sequence_system(need("seq")?, dim, hz)?, function_system(need("fun")?, dim, hz)?)
        }
        "gs" => {
            c.check_keys(&[&common[..], &["s", "t", "h"]].concat())?;
            let s = c.number("s", None)?;
            let t = c.number("t", Some(s))?;
            let h = c.number("h", Some(1.0))?;
            let m = WeightSequence::gevrey(dim, s, h).map_err(|e| located(c.pos, e))?;
            let a = WeightSequence::gevrey(dim, t, h).map_err(|e| located(c.pos, e))?;
            (
                WeightSequenceSystem::dilated(m, hz).map_err(|e| located(c.pos, e))?,
                WeightFunctionSystem::dilated(a, hz).map_err(|e| located(c.pos, e))?,
            )
        }
        "bb" => {
            c.check_keys(&[&common[..], &["omega", "eta"]].concat())?;
            let omega = c.named("omega").ok_or_else(|| err_at(c.pos, "`bb` needs `omega=`"))?;
            let eta = c.named("eta").unwrap_or(omega);
            let sys = |f: Result<BmtWeightFunction>| f.map(Arc::new);
            (
                WeightSequenceSystem::from_bmt(dim, sys(weight_function(omega))?, hz).map_err(|e| located(c.pos, e))?,
                WeightFunctionSystem::from_omega(dim, sys(weight_function(eta))?, hz).map_err(|e| located(c.pos, e))?,
            )
        }
        other => return Err(err_at(c.pos, format!("unknown space `{other}`"))),
    };
    if matches!(model, ModelKind::Mixed { .. }) && dim != 2 {
        return Err(err_at(c.pos, "mixed-norm model needs dim=2"));
    }
    Ok(SpaceSpec { kind, dim, seq, fun, model })
}

pub fn parse_space(src: &str, defaults: SpaceDefaults, hz: &Horizons) -> Result<SpaceSpec> {
    space(&parse_node(src, 1)?, defaults, hz)
}

/// `name = spec` lines; `#` starts a comment. Returns the entries in file
/// order with their line numbers.
pub fn parse_config(text: &str) -> Result<Vec<(String, String, usize)>> {
    let mut out: Vec<(String, String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, spec) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, col: 1, msg: "expected `name = spec`".into() })?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Parse { line: i + 1, col: 1, msg: format!("invalid name `{name}`") });
        }
        if out.iter().any(|(n, _, _)| n == name) {
            return Err(Error::Parse { line: i + 1, col: 1, msg: format!("duplicate name `{name}`") });
        }
        let spec = spec.trim().to_string();
        // syntax check now so errors carry the file line
        let col = raw.find('=').map_or(1, |k| k + 2 + (raw[k + 1..].len() - raw[k + 1..].trim_start().len()));
        parse_node(&spec, i + 1).map_err(|e| match e {
            Error::Parse { line, col: c, msg } => Error::Parse { line, col: c + col - 1, msg },
            other => other,
        })?;
        out.push((name.to_string(), spec, i + 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hz() -> Horizons {
        Horizons::default()
    }

    #[test]
    fn numbers_and_fractions() {
        assert_eq!(parse_number("1/3"), Some(1.0 / 3.0));
        assert_eq!(parse_number("inf"), Some(f64::INFINITY));
        assert_eq!(parse_number("-2.5e1"), Some(-25.0));
        assert_eq!(parse_number("gevrey"), None);
    }

    #[test]
    fn space_round_trips_through_canonical_form() {
        let defaults = SpaceDefaults { kind: Some(Kind::Roumieu), model: ModelKind::Lp(f64::INFINITY) };
        for src in ["gs(s=0.5)", "bb(omega=pow(rho=1/3))", "space(kind=beurling,seq=dilated(gevrey(s=2,h=1)),fun=polyshift(k=2,dilated(gevrey(s=1))),model=l0)"] {
            let a = parse_space(src, defaults, &hz()).unwrap();
            let printed = a.to_string();
            let b = parse_space(&printed, SpaceDefaults::default(), &hz()).unwrap();
            assert_eq!(printed, b.to_string());
            assert_eq!(a.seq, b.seq);
            assert_eq!(a.fun, b.fun);
            assert_eq!(a.kind, b.kind);
        }
    }

    #[test]
    fn shorthand_matches_long_form() {
        let d = SpaceDefaults { kind: Some(Kind::Beurling), model: ModelKind::Lp(2.0) };
        let short = parse_space("gs(s=1)", d, &hz()).unwrap();
        let long = parse_space("space(seq=dilated(gevrey(s=1,h=1)),fun=dilated(gevrey(s=1,h=1)),model=lp(p=2))", d, &hz()).unwrap();
        assert_eq!(short.to_string(), long.to_string());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_space("gs(s=1", SpaceDefaults::default(), &hz()).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 7, .. }), "{e:?}");
        let e = parse_space("gs(s=1,q=2)", SpaceDefaults { kind: Some(Kind::Roumieu), ..Default::default() }, &hz()).unwrap_err();
        assert!(matches!(e, Error::Parse { col: 10, .. }), "{e:?}");
        let e = parse_space("gs(s=-1)", SpaceDefaults { kind: Some(Kind::Roumieu), ..Default::default() }, &hz()).unwrap_err();
        assert!(matches!(e, Error::Parse { col: 1, .. }), "{e:?}");
        assert!(parse_space("gs(s=1)", SpaceDefaults::default(), &hz()).is_err());
    }

    #[test]
    fn test_functions() {
        let g = test_profile(&parse_node("gaussian(a=2)", 1).unwrap()).unwrap();
        assert_eq!(g, Profile::gaussian(2.0).unwrap());
        let t = test_profile(&parse_node("trig:[(1,0.5),(-2,0,1)]", 1).unwrap()).unwrap();
        assert_eq!(t, Profile::trig(vec![(1, Complex64::new(0.5, 0.0)), (-2, Complex64::new(0.0, 1.0))]));
        assert!(test_profile(&parse_node("bump(deg=2.5)", 1).unwrap()).is_err());
        assert_eq!(test_profile(&parse_node("sinc", 1).unwrap()).unwrap(), Profile::Sinc);
    }

    #[test]
    fn systems_and_sequences() {
        let n = parse_node("explicit:[(0.5,gevrey(s=1,h=0.5)),(1,gevrey(s=1,h=1))]", 1).unwrap();
        let s = sequence_system(&n, 1, &hz()).unwrap();
        assert_eq!(s.grid(), &[0.5, 1.0]);
        let t = parse_node("tensor(gevrey(s=1),table:[1,1,2,6])", 1).unwrap();
        assert_eq!(sequence(&t, 2, &hz()).unwrap().dim(), 2);
        assert!(sequence(&t, 1, &hz()).is_err());
        let w = weight_function(&parse_node("phi-table:[(0,0),(1,1),(2,3)]", 1).unwrap()).unwrap();
        assert_eq!(w.phi(1.5), 2.0);
    }

    #[test]
    fn config_files() {
        let text = "# pairs\na = gs(s=1)\n\nb = bb(omega=pow(rho=0.5)) # trailing\n";
        let entries = parse_config(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[1], ("b".into(), "bb(omega=pow(rho=0.5))".into(), 4));
        let e = parse_config("x = gs(s=1))").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 12, .. }), "{e:?}");
        assert!(parse_config("x = gs(s=1)\nx = gs(s=2)").is_err());
        assert!(parse_config("just text").is_err());
    }
}
