//! Sectioned `key = value` sweep configuration.
//!
//! ```text
//! # comment
//! [simulation]
//! dt_ms = 0.1
//! [topology]
//! kind = layered
//! layers = 100,100,100
//! [sweep]
//! ranges = 1:3,3:6,6:12
//! seeds = 0..10
//! ```
//!
//! Lines are a `[section]` header, a `key = value` pair, blank, or a `#`
//! comment. Lists are comma separated; weight ranges are `lo:hi` (or a bare
//! number for a single weight); seed lists also accept a half-open `a..b`.
//! Anything not mentioned keeps its default. [`serialize`] writes every key,
//! and parsing its output gives back an equal [`SweepConfig`].
//!
//! Graph parameters (`ba_m`, `graph_n`, `er_p`) are shared by every graph
//! method in the `method` list.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::experiment::{SweepConfig, TopologySelector};
use crate::stimulus::StimulusKind;
use crate::topology::LsmSpec;
use crate::weight_init::{InitMethod, WeightRange, DEFAULT_BA_M};

/// A malformed configuration, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: unknown section [{name}]")]
    UnknownSection {
        line: usize,
        column: usize,
        name: String,
    },

    #[error("line {line}, column {column}: unknown key `{key}` in [{section}]")]
    UnknownKey {
        line: usize,
        column: usize,
        section: String,
        key: String,
    },

    #[error("line {line}, column {column}: `{key}` already set on line {first}")]
    Duplicate {
        line: usize,
        column: usize,
        key: String,
        first: usize,
    },

    #[error("line {line}, column {column}: `{key}` expects {expected}, got `{found}`")]
    BadValue {
        line: usize,
        column: usize,
        key: String,
        expected: &'static str,
        found: String,
    },

    #[error("line {line}, column {column}: `{key}`: {message}")]
    Invariant {
        line: usize,
        column: usize,
        key: String,
        message: String,
    },
}

impl ConfigError {
    pub fn line(&self) -> usize {
        match self {
            ConfigError::Syntax { line, .. }
            | ConfigError::UnknownSection { line, .. }
            | ConfigError::UnknownKey { line, .. }
            | ConfigError::Duplicate { line, .. }
            | ConfigError::BadValue { line, .. }
            | ConfigError::Invariant { line, .. } => *line,
        }
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "simulation",
        &[
            "dt_ms",
            "duration_ms",
            "stimulus",
            "rate_hz",
            "amplitude_pa",
            "stimulus_seed",
            "kappa_mv",
            "u_rest_mv",
            "u_th_mv",
            "u_reset_mv",
            "tau_m_ms",
            "c_m_pf",
            "t_ref_ms",
        ],
    ),
    (
        "topology",
        &["kind", "layers", "n_in", "n_liquid", "n_out", "k_rec", "n_inh", "w_direct"],
    ),
    ("init", &["method", "ba_m", "graph_n", "er_p"]),
    ("sweep", &["ranges", "epochs", "seeds"]),
    ("metrics", &["vp_q_per_ms", "vr_tau_ms"]),
    (
        "stdp",
        &["enabled", "a_plus", "a_minus", "tau_plus_ms", "tau_minus_ms", "w_floor", "w_ceiling"],
    ),
];

const LSM_KEYS: &[&str] = &["n_in", "n_liquid", "n_out", "k_rec", "n_inh", "w_direct"];
const LIF_KEYS: &[&str] = &[
    "kappa_mv",
    "u_rest_mv",
    "u_th_mv",
    "u_reset_mv",
    "tau_m_ms",
    "c_m_pf",
    "t_ref_ms",
];

struct Entry<'a> {
    line: usize,
    column: usize,
    value: &'a str,
}

struct Doc<'a> {
    entries: HashMap<&'static str, Entry<'a>>,
}

fn canonical_key(section: &str, key: &str) -> Option<&'static str> {
    SECTIONS
        .iter()
        .find(|(s, _)| *s == section)
        .and_then(|(_, keys)| keys.iter().copied().find(|k| *k == key))
}

fn lex(text: &str) -> Result<Doc<'_>, ConfigError> {
    let mut entries: HashMap<&'static str, Entry<'_>> = HashMap::new();
    let mut section: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let indent = raw.len() - raw.trim_start().len();
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let col = |byte: usize| raw[..byte].chars().count() + 1;
        if let Some(rest) = body.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(ConfigError::Syntax {
                    line,
                    column: col(indent + body.len()),
                    message: "section header must end with `]`".into(),
                });
            };
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(ConfigError::UnknownSection {
                    line,
                    column: col(indent),
                    name: name.into(),
                });
            }
            section = Some(SECTIONS.iter().find(|(s, _)| *s == name).unwrap().0);
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(ConfigError::Syntax {
                line,
                column: col(indent),
                message: "expected `key = value`, `[section]` or `# comment`".into(),
            });
        };
        let key = body[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ConfigError::Syntax {
                line,
                column: col(indent),
                message: format!("invalid key `{key}`"),
            });
        }
        let value_raw = &body[eq + 1..];
        let value = value_raw.trim();
        let value_col = col(indent + eq + 1 + (value_raw.len() - value_raw.trim_start().len()));
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                column: value_col,
                message: format!("missing value for `{key}`"),
            });
        }
        let Some(sec) = section else {
            return Err(ConfigError::Syntax {
                line,
                column: col(indent),
                message: format!("`{key}` appears before any [section]"),
            });
        };
        let Some(canon) = canonical_key(sec, key) else {
            return Err(ConfigError::UnknownKey {
                line,
                column: col(indent),
                section: sec.into(),
                key: key.into(),
            });
        };
        if let Some(first) = entries.get(canon) {
            return Err(ConfigError::Duplicate {
                line,
                column: col(indent),
                key: key.into(),
                first: first.line,
            });
        }
        entries.insert(
            canon,
            Entry {
                line,
                column: value_col,
                value,
            },
        );
    }
    Ok(Doc { entries })
}

impl<'a> Doc<'a> {
    fn bad(&self, key: &'static str, expected: &'static str) -> ConfigError {
        let e = &self.entries[key];
        ConfigError::BadValue {
            line: e.line,
            column: e.column,
            key: key.into(),
            expected,
            found: e.value.into(),
        }
    }

    fn invariant(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let (line, column) = self
            .entries
            .get(key)
            .map(|e| (e.line, e.column))
            .unwrap_or((0, 0));
        ConfigError::Invariant {
            line,
            column,
            key: key.into(),
            message: message.into(),
        }
    }

    /// Of `keys`, the one set latest in the document.
    fn latest(&self, keys: &[&'static str]) -> &'static str {
        keys.iter()
            .copied()
            .filter(|k| self.entries.contains_key(k))
            .max_by_key(|k| self.entries[k].line)
            .unwrap_or(keys[0])
    }

    fn get<T>(
        &self,
        key: &'static str,
        expected: &'static str,
        parse: impl Fn(&str) -> Option<T>,
    ) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => parse(e.value).map(Some).ok_or_else(|| self.bad(key, expected)),
        }
    }

    fn float(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        self.get(key, "a finite decimal number", parse_float)
    }

    fn positive(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v = self.float(key)?;
        if v.is_some_and(|v| v <= 0.0) {
            return Err(self.invariant(key, "must be positive"));
        }
        Ok(v)
    }

    fn non_negative(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v = self.float(key)?;
        if v.is_some_and(|v| v < 0.0) {
            return Err(self.invariant(key, "must be non-negative"));
        }
        Ok(v)
    }

    fn uint(&self, key: &'static str) -> Result<Option<u64>, ConfigError> {
        self.get(key, "a non-negative integer", |s| s.parse::<u64>().ok())
    }

    fn usize_(&self, key: &'static str) -> Result<Option<usize>, ConfigError> {
        self.get(key, "a non-negative integer", |s| s.parse::<usize>().ok())
    }

    fn auto<T>(
        &self,
        key: &'static str,
        expected: &'static str,
        parse: impl Fn(&str) -> Option<T>,
    ) -> Result<Option<Option<T>>, ConfigError> {
        self.get(key, expected, |s| if s == "auto" { Some(None) } else { parse(s).map(Some) })
    }
}

fn parse_float(s: &str) -> Option<f64> {
    // Rust accepts "inf" and "nan"; configs should not.
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn list<T>(s: &str, item: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(|p| item(p.trim())).collect()
}

fn parse_range(s: &str) -> Option<(f64, f64)> {
    match s.split_once(':') {
        Some((lo, hi)) => Some((parse_float(lo.trim())?, parse_float(hi.trim())?)),
        None => parse_float(s).map(|w| (w, w)),
    }
}

fn parse_seeds(s: &str) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?);
            if b <= a {
                return None;
            }
            out.extend(a..b);
        } else {
            out.push(part.parse::<u64>().ok()?);
        }
    }
    Some(out)
}

fn parse_method(s: &str) -> Option<&'static str> {
    ["uniform", "barabasi_albert", "erdos_renyi"]
        .into_iter()
        .find(|m| *m == s)
}

fn has_duplicates<T: PartialEq>(v: &[T]) -> bool {
    v.iter().enumerate().any(|(i, a)| v[..i].contains(a))
}

/// Parses a configuration document into a fully defaulted [`SweepConfig`].
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let doc = lex(text)?;
    let mut c = SweepConfig::default();

    // [simulation]
    if let Some(v) = doc.positive("dt_ms")? {
        c.dt = v;
    }
    if let Some(v) = doc.positive("duration_ms")? {
        c.duration = v;
    }
    if let Some(k) = doc.get("stimulus", "`regular` or `poisson`", |s| match s {
        "regular" => Some(StimulusKind::Regular),
        "poisson" => Some(StimulusKind::Poisson),
        _ => None,
    })? {
        c.stimulus.kind = k;
    }
    if let Some(v) = doc.positive("rate_hz")? {
        c.stimulus.rate = v;
    }
    if let Some(v) = doc.non_negative("amplitude_pa")? {
        c.stimulus.amplitude = v;
    }
    if let Some(v) = doc.uint("stimulus_seed")? {
        c.stimulus.seed = v;
    }
    if let Some(v) = doc.positive("kappa_mv")? {
        c.lif.kappa = v;
    }
    if let Some(v) = doc.float("u_rest_mv")? {
        c.lif.u_rest = v;
    }
    if let Some(v) = doc.float("u_th_mv")? {
        c.lif.u_th = v;
    }
    if let Some(v) = doc.float("u_reset_mv")? {
        c.lif.u_reset = v;
    }
    if let Some(v) = doc.positive("tau_m_ms")? {
        c.lif.tau_m = v;
    }
    if let Some(v) = doc.positive("c_m_pf")? {
        c.lif.c_m = v;
    }
    if let Some(v) = doc.non_negative("t_ref_ms")? {
        c.lif.t_ref = v;
    }
    if let Err(e) = c.lif.validate() {
        return Err(doc.invariant(doc.latest(LIF_KEYS), e.to_string()));
    }
    if let Err(e) = c.stimulus.validate() {
        return Err(doc.invariant(doc.latest(&["rate_hz", "amplitude_pa"]), e.to_string()));
    }

    // [topology]
    let kind = doc
        .get("kind", "`layered` or `lsm`", |s| match s {
            "layered" | "lsm" => Some(s == "lsm"),
            _ => None,
        })?
        .unwrap_or(true);
    if kind {
        let mut spec = LsmSpec::default();
        if let Some(v) = doc.usize_("n_in")? {
            spec.n_in = v;
        }
        if let Some(v) = doc.usize_("n_liquid")? {
            spec.n_liquid = v;
        }
        if let Some(v) = doc.usize_("n_out")? {
            spec.n_out = v;
        }
        if let Some(v) = doc.usize_("k_rec")? {
            spec.k_rec = v;
        }
        if let Some(v) = doc.auto("n_inh", "an integer or `auto`", |s| s.parse::<usize>().ok())? {
            spec.n_inh = v;
        }
        if let Some(v) = doc.auto("w_direct", "a decimal number or `auto`", parse_float)? {
            if v.is_some_and(|w| w < 0.0) {
                return Err(doc.invariant("w_direct", "must be non-negative"));
            }
            spec.w_direct = v;
        }
        if doc.entries.contains_key("layers") {
            return Err(doc.invariant("layers", "only applies to `kind = layered`"));
        }
        if spec.n_in == 0 || spec.n_out == 0 {
            return Err(doc.invariant(doc.latest(&["n_in", "n_out"]), "needs at least one input and output"));
        }
        if spec.n_in != spec.n_out {
            return Err(doc.invariant(
                doc.latest(&["n_in", "n_out"]),
                format!("n_in ({}) must equal n_out ({})", spec.n_in, spec.n_out),
            ));
        }
        if spec.n_liquid < 2 || spec.k_rec >= spec.n_liquid {
            return Err(doc.invariant(
                doc.latest(&["n_liquid", "k_rec"]),
                "need n_liquid >= 2 and k_rec < n_liquid",
            ));
        }
        if spec.inhibitory_count() > spec.recurrent_count() {
            return Err(doc.invariant("n_inh", "exceeds the number of recurrent synapses"));
        }
        c.topology = TopologySelector::Lsm(spec);
    } else {
        if let Some(k) = LSM_KEYS.iter().find(|k| doc.entries.contains_key(*k)) {
            return Err(doc.invariant(k, "only applies to `kind = lsm`"));
        }
        let sizes = doc
            .get("layers", "a comma list of layer sizes", |s| {
                list(s, |p| p.parse::<usize>().ok())
            })?
            .unwrap_or_else(|| vec![2, 2]);
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(doc.invariant("layers", "need at least two non-empty layers"));
        }
        c.topology = TopologySelector::Layered(sizes);
    }

    // [init]
    let names = doc
        .get("method", "a comma list of uniform|barabasi_albert|erdos_renyi", |s| {
            list(s, parse_method)
        })?
        .unwrap_or_else(|| vec!["uniform", "barabasi_albert", "erdos_renyi"]);
    if has_duplicates(&names) {
        return Err(doc.invariant("method", "lists a method twice"));
    }
    let m = doc.usize_("ba_m")?.unwrap_or(DEFAULT_BA_M);
    let n = doc
        .auto("graph_n", "an integer or `auto`", |s| s.parse::<usize>().ok())?
        .flatten();
    let p = doc.auto("er_p", "a probability or `auto`", parse_float)?.flatten();
    c.methods = names
        .iter()
        .map(|name| match *name {
            "uniform" => InitMethod::UniformRandom,
            "barabasi_albert" => InitMethod::BarabasiAlbert { n, m },
            _ => InitMethod::ErdosRenyi { n, p },
        })
        .collect();
    if m == 0 {
        return Err(doc.invariant("ba_m", "must be at least 1"));
    }
    for method in &c.methods {
        if let Err(e) = method.validate() {
            return Err(doc.invariant(doc.latest(&["graph_n", "ba_m", "er_p"]), e.to_string()));
        }
    }

    // [sweep]
    if let Some(pairs) = doc.get("ranges", "a comma list of `lo:hi` ranges", |s| list(s, parse_range))? {
        let mut ranges = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            let r = if lo == hi { WeightRange::point(lo) } else { WeightRange::new(lo, hi) };
            ranges.push(r.map_err(|e| doc.invariant("ranges", e.to_string()))?);
        }
        if has_duplicates(&ranges) {
            return Err(doc.invariant("ranges", "lists a range twice"));
        }
        c.ranges = ranges;
    }
    if let Some(v) = doc.usize_("epochs")? {
        if v == 0 {
            return Err(doc.invariant("epochs", "must be at least 1"));
        }
        c.epochs = v;
    }
    if let Some(v) = doc.get("seeds", "a comma list of integers or `a..b`", parse_seeds)? {
        if has_duplicates(&v) {
            return Err(doc.invariant("seeds", "lists a seed twice"));
        }
        c.seeds = v;
    }

    // [metrics]
    if let Some(v) = doc.non_negative("vp_q_per_ms")? {
        c.vp.q = v;
    }
    if let Some(v) = doc.positive("vr_tau_ms")? {
        c.vr.tau = v;
    }

    // [stdp]
    if let Some(v) = doc.get("enabled", "`true` or `false`", |s| s.parse::<bool>().ok())? {
        c.plasticity_on = v;
    }
    if let Some(v) = doc.non_negative("a_plus")? {
        c.stdp.a_plus = v;
    }
    if let Some(v) = doc.non_negative("a_minus")? {
        c.stdp.a_minus = v;
    }
    if let Some(v) = doc.positive("tau_plus_ms")? {
        c.stdp.tau_plus = v;
    }
    if let Some(v) = doc.positive("tau_minus_ms")? {
        c.stdp.tau_minus = v;
    }
    if let Some(v) = doc.float("w_floor")? {
        c.stdp.w_floor = v;
    }
    if let Some(v) = doc.auto("w_ceiling", "a decimal number or `auto`", parse_float)? {
        c.stdp_ceiling = v;
    }
    for &range in &c.ranges {
        if let Err(e) = c.stdp_for(range).validate() {
            return Err(doc.invariant(doc.latest(&["w_floor", "w_ceiling", "ranges"]), e.to_string()));
        }
    }
    Ok(c)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

fn seeds_text(seeds: &[u64]) -> String {
    let contiguous = seeds.len() >= 3 && seeds.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        format!("{}..{}", seeds[0], seeds[seeds.len() - 1] + 1)
    } else {
        join(seeds, |s| s.to_string())
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "auto".to_string(), |v| v.to_string())
}

/// Writes every key of `config`. Graph parameters are taken from the first
/// graph method in the list.
pub fn serialize(config: &SweepConfig) -> String {
    let mut s = String::new();
    let c = config;
    let _ = writeln!(s, "[simulation]");
    let _ = writeln!(s, "dt_ms = {}", c.dt);
    let _ = writeln!(s, "duration_ms = {}", c.duration);
    let _ = writeln!(s, "stimulus = {}", c.stimulus.kind.name());
    let _ = writeln!(s, "rate_hz = {}", c.stimulus.rate);
    let _ = writeln!(s, "amplitude_pa = {}", c.stimulus.amplitude);
    let _ = writeln!(s, "stimulus_seed = {}", c.stimulus.seed);
    let _ = writeln!(s, "kappa_mv = {}", c.lif.kappa);
    let _ = writeln!(s, "u_rest_mv = {}", c.lif.u_rest);
    let _ = writeln!(s, "u_th_mv = {}", c.lif.u_th);
    let _ = writeln!(s, "u_reset_mv = {}", c.lif.u_reset);
    let _ = writeln!(s, "tau_m_ms = {}", c.lif.tau_m);
    let _ = writeln!(s, "c_m_pf = {}", c.lif.c_m);
    let _ = writeln!(s, "t_ref_ms = {}", c.lif.t_ref);

    let _ = writeln!(s, "\n[topology]");
    match &c.topology {
        TopologySelector::Layered(sizes) => {
            let _ = writeln!(s, "kind = layered");
            let _ = writeln!(s, "layers = {}", join(sizes, |n| n.to_string()));
        }
        TopologySelector::Lsm(spec) => {
            let _ = writeln!(s, "kind = lsm");
            let _ = writeln!(s, "n_in = {}", spec.n_in);
            let _ = writeln!(s, "n_liquid = {}", spec.n_liquid);
            let _ = writeln!(s, "n_out = {}", spec.n_out);
            let _ = writeln!(s, "k_rec = {}", spec.k_rec);
            let _ = writeln!(s, "n_inh = {}", opt(spec.n_inh));
            let _ = writeln!(s, "w_direct = {}", opt(spec.w_direct));
        }
    }

    let (mut m, mut n, mut p) = (DEFAULT_BA_M, None, None);
    if let Some(g) = c.methods.iter().find(|x| !matches!(x, InitMethod::UniformRandom)) {
        match *g {
            InitMethod::BarabasiAlbert { n: gn, m: gm } => {
                n = gn;
                m = gm;
                if let Some(InitMethod::ErdosRenyi { p: ep, .. }) =
                    c.methods.iter().find(|x| matches!(x, InitMethod::ErdosRenyi { .. }))
                {
                    p = *ep;
                }
            }
            InitMethod::ErdosRenyi { n: gn, p: gp } => {
                n = gn;
                p = gp;
                if let Some(InitMethod::BarabasiAlbert { m: bm, .. }) =
                    c.methods.iter().find(|x| matches!(x, InitMethod::BarabasiAlbert { .. }))
                {
                    m = *bm;
                }
            }
            InitMethod::UniformRandom => unreachable!(),
        }
    }
    let _ = writeln!(s, "\n[init]");
    let _ = writeln!(s, "method = {}", join(&c.methods, |x| x.name().to_string()));
    let _ = writeln!(s, "ba_m = {m}");
    let _ = writeln!(s, "graph_n = {}", opt(n));
    let _ = writeln!(s, "er_p = {}", opt(p));

    let _ = writeln!(s, "\n[sweep]");
    let _ = writeln!(s, "ranges = {}", join(&c.ranges, |r| r.to_string()));
    let _ = writeln!(s, "epochs = {}", c.epochs);
    let _ = writeln!(s, "seeds = {}", seeds_text(&c.seeds));

    let _ = writeln!(s, "\n[metrics]");
    let _ = writeln!(s, "vp_q_per_ms = {}", c.vp.q);
    let _ = writeln!(s, "vr_tau_ms = {}", c.vr.tau);

    let _ = writeln!(s, "\n[stdp]");
    let _ = writeln!(s, "enabled = {}", c.plasticity_on);
    let _ = writeln!(s, "a_plus = {}", c.stdp.a_plus);
    let _ = writeln!(s, "a_minus = {}", c.stdp.a_minus);
    let _ = writeln!(s, "tau_plus_ms = {}", c.stdp.tau_plus);
    let _ = writeln!(s, "tau_minus_ms = {}", c.stdp.tau_minus);
    let _ = writeln!(s, "w_floor = {}", c.stdp.w_floor);
    let _ = writeln!(s, "w_ceiling = {}", opt(c.stdp_ceiling));
    s
}

/// Reads and parses a config file.
pub fn load(path: impl AsRef<Path>) -> crate::Result<SweepConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    parse_config(&text).map_err(|e| crate::Error::Config {
        path: path.display().to_string(),
        cause: e,
    })
}
