//! Turning command-line strings into quandles, diagrams and cocycles.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use quandle_homotopy::cocycles::{enumerate_families, family_polynomial, AlexanderField, CocyclePolynomial, Family};
use quandle_homotopy::field::{Field, FieldElement, FqSpec};
use quandle_homotopy::link::{CocycleTable, LinkDiagram};
use quandle_homotopy::quandle::{AlexanderQuandle, FiniteQuandle};
use serde::Deserialize;

/// A quandle from the command line, with the Alexander structure when there is one.
pub enum Loaded {
    Alexander(AlexanderQuandle),
    Plain { label: String, quandle: FiniteQuandle },
}

impl Loaded {
    pub fn quandle(&self) -> &FiniteQuandle {
        match self {
            Loaded::Alexander(x) => x.quandle(),
            Loaded::Plain { quandle, .. } => quandle,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Loaded::Alexander(x) => x.spec().to_string(),
            Loaded::Plain { label, .. } => label.clone(),
        }
    }

    pub fn alexander(&self) -> Result<&AlexanderQuandle> {
        match self {
            Loaded::Alexander(x) => Ok(x),
            Loaded::Plain { label, .. } => bail!("{label} is not an Alexander quandle"),
        }
    }
}

/// `trivial:<n>`, `table:<path>`, or any Alexander spec.
pub fn quandle(spec: &str) -> Result<Loaded> {
    let spec = spec.trim();
    if let Some(n) = spec.strip_prefix("trivial:") {
        let n: usize = n.trim().parse().with_context(|| format!("bad size in {spec:?}"))?;
        if n == 0 {
            bail!("a quandle needs at least one element");
        }
        return Ok(Loaded::Plain { label: format!("trivial:{n}"), quandle: FiniteQuandle::trivial(n) });
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let q = FiniteQuandle::from_table_text(&text).with_context(|| format!("in {path}"))?;
        return Ok(Loaded::Plain { label: spec.to_string(), quandle: q });
    }
    Ok(Loaded::Alexander(AlexanderQuandle::parse(spec)?))
}

/// A PD file, `braid:<strands>:<word>` or `unknot`.
pub fn diagram(source: &str) -> Result<LinkDiagram> {
    if source == "unknot" {
        return Ok(LinkDiagram::unknot());
    }
    if let Some(rest) = source.strip_prefix("braid:") {
        let (strands, word) = rest.split_once(':').ok_or_else(|| anyhow!("expected braid:<strands>:<word>"))?;
        let strands = strands.trim().parse().context("bad strand count")?;
        let word: Vec<i32> = word
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().with_context(|| format!("bad braid letter {s:?}")))
            .collect::<Result<_>>()?;
        return Ok(LinkDiagram::from_braid(strands, &word)?);
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    LinkDiagram::parse_pd(&text).with_context(|| format!("in {source}"))
}

pub fn alexander_field(field: &str, omega: &str) -> Result<(AlexanderField, AlexanderQuandle)> {
    let spec = FqSpec::parse(field)?;
    let x = AlexanderQuandle::parse(&format!("gf:{spec}:omega={omega}"))?;
    Ok((AlexanderField::of(&x)?, x))
}

/// Family names compare without spaces, `p*` markers and the Gamma case suffix.
fn normalize(id: &str) -> String {
    let s: String = id.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.split('[').next().unwrap_or_default().to_string();
    s.replace("p*", "")
}

/// A member of the spanning family by name (`E1(1,p*3)`, `F(1,3,0)`, ...) or position (`#2`).
pub fn family(s: &AlexanderField, id: &str) -> Result<Family> {
    let all = enumerate_families(s);
    if let Some(k) = id.trim().strip_prefix('#') {
        let k: usize = k.parse().context("bad family index")?;
        return all.get(k).copied().ok_or_else(|| anyhow!("family index {k} out of range (0..{})", all.len()));
    }
    let want = normalize(id);
    all.into_iter()
        .find(|f| normalize(&f.to_string()) == want)
        .ok_or_else(|| anyhow!("{id:?} is not in the spanning family for this field and omega"))
}

#[derive(Deserialize)]
pub struct TermJson {
    pub e: [u64; 3],
    pub c: String,
}

#[derive(Deserialize)]
struct CocycleFile {
    arity: Option<usize>,
    terms: Option<Vec<TermJson>>,
    values: Option<Vec<String>>,
}

pub fn polynomial(field: &Arc<Field>, terms: &[TermJson]) -> Result<CocyclePolynomial> {
    let mut out = CocyclePolynomial::zero(field);
    for t in terms {
        let c = field.parse_element(&t.c)?;
        out = out.add(&CocyclePolynomial::monomial(field, c, t.e));
    }
    Ok(out)
}

/// What `--cocycle` named: a polynomial (arity 3) or a raw value table.
pub enum CocycleSource {
    Polynomial { name: String, poly: CocyclePolynomial },
    Table { name: String, table: CocycleTable },
}

impl CocycleSource {
    pub fn name(&self) -> &str {
        match self {
            CocycleSource::Polynomial { name, .. } | CocycleSource::Table { name, .. } => name,
        }
    }
}

/// `--cocycle` is a JSON file if such a path exists, else a family name.
pub fn cocycle(id: &str, x: &Loaded) -> Result<CocycleSource> {
    let path = Path::new(id);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {id}"))?;
        let file: CocycleFile = serde_json::from_str(&text).with_context(|| format!("parsing {id}"))?;
        let field = x
            .alexander()
            .ok()
            .and_then(|a| a.field())
            .map(|(f, _)| f.clone())
            .ok_or_else(|| anyhow!("cocycle files need a quandle on a finite field (gf:...)"))?;
        return match (file.terms, file.values) {
            (Some(terms), None) => {
                if file.arity.unwrap_or(3) != 3 {
                    bail!("polynomial cocycles have arity 3");
                }
                Ok(CocycleSource::Polynomial { name: id.to_string(), poly: polynomial(&field, &terms)? })
            }
            (None, Some(values)) => {
                let arity = file.arity.ok_or_else(|| anyhow!("a value table needs \"arity\""))?;
                let n = x.quandle().order();
                if values.len() != n.pow(arity as u32) {
                    bail!("expected {} values for arity {arity}, found {}", n.pow(arity as u32), values.len());
                }
                let parsed: Vec<FieldElement> =
                    values.iter().map(|v| field.parse_element(v)).collect::<Result<_, _>>()?;
                let table =
                    CocycleTable::from_fn(&field, n, arity, |xs| parsed[xs.iter().fold(0, |acc, &v| acc * n + v)]);
                Ok(CocycleSource::Table { name: id.to_string(), table })
            }
            _ => bail!("{id}: give exactly one of \"terms\" or \"values\""),
        };
    }
    let a = x.alexander()?;
    let s = AlexanderField::of(a)?;
    let fam = family(&s, id)?;
    let poly = family_polynomial(&s, fam).with_context(|| format!("{fam} has no closed form"))?;
    Ok(CocycleSource::Polynomial { name: fam.to_string(), poly })
}

pub fn elements(field: &Field, text: &str) -> Result<Vec<FieldElement>> {
    text.split(',').map(|t| Ok(field.parse_element(t.trim())?)).collect()
}
