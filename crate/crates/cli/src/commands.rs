use std::cmp::Reverse;
use std::io;

use serde_json::json;
use thiserror::Error;

use sl2_uea::arith::{self, Rational};
use sl2_uea::expr::{self, Expr};
use sl2_uea::iwasawa::lazard::{exp_p_generator, lazard_limits};
use sl2_uea::iwasawa::{
    exp_pn_decay, genericity_probe, lazard_ops, microlocalise, NcSeries, PMatrix2,
};
use sl2_uea::pbw::{filtration_rank_u, Element, MultiDegree, PbwMonomial};
use sl2_uea::quotient::{
    gr_hilbert, quadric_hilbert_function, quot_filtration_dim, reduce, reduced_monomials,
    CentralCharacter,
};
use sl2_uea::rep::{bound_table, checked_multiplicity};
use sl2_uea::Error;

use crate::output::Table;
use crate::{
    BoundsArgs, DimsArgs, GenericArgs, LazardArgs, MicroArgs, MultArgs, NfArgs, NormsArgs,
    PadicArgs, WeightArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(io::Error),
}

impl CliError {
    /// 2: bad input; 3: two independent computations disagree;
    /// 4: not enough p-adic precision for the request.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Consistency(_)) => 3,
            CliError::Core(Error::PrecisionExhausted(_)) => 4,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_u32_list(text: &str, what: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("invalid {what} `{text}`")))
        })
        .collect()
}

/// Inclusive range "a..b", or a comma list.
fn parse_range(text: &str, what: &str) -> Result<Vec<u32>> {
    match text.split_once("..") {
        Some((a, b)) => {
            let bad = || usage(format!("invalid {what} range `{text}`"));
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => parse_u32_list(text, what),
    }
}

/// "weight:k1,k2,…" or explicit rationals "a/b,c,…".
fn parse_lambda(text: &str) -> Result<CentralCharacter> {
    if let Some(ks) = text.strip_prefix("weight:") {
        return Ok(CentralCharacter::weight(&parse_u32_list(ks, "weight")?));
    }
    let values = text
        .split(',')
        .map(arith::parse_rational)
        .collect::<sl2_uea::Result<Vec<_>>>()?;
    Ok(CentralCharacter::rational(values))
}

fn fmt_k(k: &[u32]) -> String {
    let parts: Vec<String> = k.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn sorted_terms<'a>(
    terms: impl Iterator<Item = (&'a PbwMonomial, &'a Rational)>,
) -> Vec<(&'a PbwMonomial, &'a Rational)> {
    let mut v: Vec<_> = terms.collect();
    v.sort_by_key(|(m, _)| (Reverse(m.total_degree()), *m));
    v
}

fn parse_algebra(text: &str, r: Option<usize>) -> Result<(Expr, usize)> {
    let e = expr::parse(text)?;
    let rank = r.unwrap_or_else(|| e.rank().max(1));
    Ok((e, rank))
}

pub fn nf(a: &NfArgs) -> Result<Table> {
    let (e, mut rank) = parse_algebra(&a.expr, a.r)?;
    let character = match &a.lambda {
        Some(l) => {
            let mut c = parse_lambda(l)?;
            if a.r.is_none() {
                rank = rank.max(c.rank());
            }
            if c.rank() != rank {
                return Err(usage(format!(
                    "λ has {} values but the algebra has {rank} factors",
                    c.rank()
                )));
            }
            match (a.prime, a.precision) {
                (Some(p), Some(m)) => c = c.to_padic(p, m)?,
                (None, None) => {}
                _ => return Err(usage("--prime and --precision go together")),
            }
            Some(c)
        }
        None if a.prime.is_some() || a.precision.is_some() => {
            return Err(usage("--prime/--precision need --lambda"))
        }
        None => None,
    };
    let element = expr::normal_form(&e, rank)?;
    let config = json!({
        "command": "nf",
        "expr": a.expr,
        "r": rank,
        "lambda": character.as_ref().map(ToString::to_string),
    });
    let mut table = Table::new(&["monomial", "coefficient"], config);
    match character {
        None => {
            for (m, c) in sorted_terms(element.terms()) {
                table.push(vec![m.to_string(), arith::fmt_rational(c)]);
            }
            table.summary = Some(json!({ "element": element.to_string() }));
        }
        Some(ch) => {
            let q = reduce(&element, &ch)?;
            for (m, c) in sorted_terms(q.terms()) {
                let shown = match ch.modulus() {
                    Some(pm) => format!("{} mod {pm}", c.numer()),
                    None => arith::fmt_rational(c),
                };
                table.push(vec![m.to_string(), shown]);
            }
            table.summary = Some(json!({ "element": q.to_string() }));
        }
    }
    Ok(table)
}

pub fn dims(a: &DimsArgs) -> Result<Table> {
    let character = a.lambda.as_deref().map(parse_lambda).transpose()?;
    let config = json!({
        "command": "dims",
        "d": a.d,
        "quot": a.quot,
        "lambda": character.as_ref().map(ToString::to_string),
        "hilbert": a.hilbert,
    });
    if let Some(n_max) = a.hilbert {
        let mut table = Table::new(&["n", "gr_hilbert"], config);
        for n in 0..=n_max {
            let formula = gr_hilbert(n);
            let oracle = quadric_hilbert_function(n);
            if formula != oracle {
                return Err(Error::Consistency(format!(
                    "gr_hilbert({n}) = {formula} but the quadric has {oracle}"
                ))
                .into());
            }
            table.push(vec![n.to_string(), formula.to_string()]);
        }
        return Ok(table);
    }
    let d = MultiDegree(parse_u32_list(
        a.d.as_deref().ok_or_else(|| usage("dims needs --d or --hilbert"))?,
        "multidegree",
    )?);
    if let Some(ch) = &character {
        if ch.rank() != d.rank() {
            return Err(usage(format!(
                "λ has {} values but d has {} entries",
                ch.rank(),
                d.rank()
            )));
        }
    }
    let mut table = Table::new(&["d", "dim"], config);
    let dim = if a.quot {
        let formula = quot_filtration_dim(&d);
        let counted = reduced_monomials(&d).len() as u64;
        if formula != counted {
            return Err(Error::Consistency(format!(
                "∏(d+1)² = {formula} but {counted} reduced monomials"
            ))
            .into());
        }
        formula
    } else if a.lambda.is_some() {
        return Err(usage("--lambda applies to --quot"));
    } else {
        filtration_rank_u(&d)
    };
    table.push(vec![d.to_string(), dim.to_string()]);
    Ok(table)
}

fn weight_grid(w: &WeightArgs, delta_rank: usize) -> Result<Vec<Vec<u32>>> {
    let mut ks: Vec<Vec<u32>> = w
        .k
        .iter()
        .map(|s| parse_u32_list(s, "weight"))
        .collect::<Result<_>>()?;
    if let Some(range) = &w.k_parallel {
        let r = w.r.unwrap_or_else(|| delta_rank.max(1));
        ks.extend(parse_range(range, "weight")?.into_iter().map(|j| vec![j; r]));
    }
    if ks.is_empty() {
        return Err(usage("give weights with --k or --k-parallel"));
    }
    if let Some(r) = w.r {
        if let Some(k) = ks.iter().find(|k| k.len() != r) {
            return Err(usage(format!("weight {} does not have r = {r} entries", fmt_k(k))));
        }
    }
    if let Some(k) = ks.iter().find(|k| k.len() < delta_rank) {
        return Err(usage(format!(
            "weight {} has fewer entries than δ has factors ({delta_rank})",
            fmt_k(k)
        )));
    }
    Ok(ks)
}

fn parse_delta(text: &str, ks: &[Vec<u32>]) -> Result<Element> {
    let e = expr::parse(text)?;
    let rank = ks.iter().map(Vec::len).max().unwrap_or(1).max(e.rank());
    Ok(expr::normal_form(&e, rank)?)
}

pub fn mult(a: &MultArgs) -> Result<Table> {
    let rank = expr::parse(&a.delta)?.rank();
    let ks = weight_grid(&a.weights, rank)?;
    let delta = parse_delta(&a.delta, &ks)?;
    let config = json!({ "command": "mult", "delta": delta.to_string() });
    let mut table = Table::new(&["k", "multiplicity", "free"], config);
    for k in &ks {
        let m = checked_multiplicity(&delta, k)?;
        table.push(vec![fmt_k(k), m.value.to_string(), m.free.to_string()]);
    }
    Ok(table)
}

pub fn bounds(a: &BoundsArgs) -> Result<Table> {
    let rank = expr::parse(&a.delta)?.rank();
    let ks = weight_grid(&a.weights, rank)?;
    let delta = parse_delta(&a.delta, &ks)?;
    let alpha = match &a.alpha {
        Some(s) => MultiDegree(parse_u32_list(s, "alpha")?),
        None => {
            let mut d = delta.multidegree()?;
            d.0.resize(ks[0].len(), 0);
            d
        }
    };
    let rows = bound_table(&delta, &ks, &alpha)?;
    let violations = rows.iter().filter(|r| !r.ok).count();
    let config = json!({
        "command": "bounds",
        "delta": delta.to_string(),
        "alpha": alpha.to_string(),
    });
    let mut table = Table::new(&["k", "multiplicity", "bound", "ok"], config);
    for r in &rows {
        table.push(vec![
            fmt_k(&r.k),
            r.multiplicity.to_string(),
            arith::fmt_rational(&r.bound),
            r.ok.to_string(),
        ]);
    }
    table.summary = Some(json!({ "violations": violations }));
    Ok(table)
}

fn series_template(p: &PadicArgs, nvars: usize) -> Result<NcSeries> {
    Ok(NcSeries::new(p.prime, nvars, p.degree, p.precision)?)
}

pub fn micro(a: &MicroArgs) -> Result<Table> {
    let e = expr::parse(&a.series)?;
    let r = a.r.unwrap_or_else(|| e.nvars().div_ceil(3).max(1));
    if e.nvars() > 3 * r {
        return Err(usage(format!("series uses b{} but r = {r}", e.nvars())));
    }
    let s = expr::to_series(&e, &series_template(&a.padic, 3 * r)?)?;
    let img = microlocalise(&s, a.padic.degree, a.padic.precision)?;
    let config = json!({
        "command": "micro",
        "series": a.series,
        "r": r,
        "prime": a.padic.prime,
        "precision": a.padic.precision,
        "degree": a.padic.degree,
    });
    let mut table = Table::new(&["monomial", "coefficient"], config);
    for (m, c) in sorted_terms(img.element().terms()) {
        table.push(vec![
            m.to_string(),
            format!("{} mod {}^{}", c.numer(), a.padic.prime, img.precision()),
        ]);
    }
    table.summary = Some(json!({
        "precision": img.precision(),
        "degree_cutoff": img.cutoff(),
        "element": img.element().to_string(),
    }));
    Ok(table)
}

pub fn norms(a: &NormsArgs) -> Result<Table> {
    let ns = parse_range(&a.n, "n")?;
    let p = a.padic.prime;
    if let Some(k_max) = a.decay {
        let config = json!({ "command": "norms", "prime": p, "n": ns, "decay": k_max });
        let mut table = Table::new(&["n", "k", "value"], config);
        for &n in &ns {
            for (k, v) in exp_pn_decay(p, n, k_max)?.iter().enumerate() {
                table.push(vec![n.to_string(), k.to_string(), arith::fmt_rational(v)]);
            }
        }
        return Ok(table);
    }
    let s = match (&a.series, a.log_var) {
        (Some(text), None) => {
            let e = expr::parse(text)?;
            let nvars = e.nvars().max(1);
            expr::to_series(&e, &series_template(&a.padic, nvars)?)?
        }
        (None, Some(i)) if i >= 1 => series_template(&a.padic, i)?.log_one_plus(i - 1)?,
        _ => return Err(usage("norms needs --series, --log-var i (i ≥ 1) or --decay")),
    };
    let config = json!({
        "command": "norms",
        "series": a.series,
        "log_var": a.log_var,
        "prime": p,
        "precision": a.padic.precision,
        "degree": a.padic.degree,
    });
    let mut table = Table::new(&["n", "log_norm"], config);
    for &n in &ns {
        let v = s.norm_r(n);
        let shown = match v.value() {
            Some(x) => arith::fmt_rational(x),
            None => "-inf".to_string(),
        };
        table.push(vec![n.to_string(), shown]);
    }
    Ok(table)
}

pub fn generic(a: &GenericArgs) -> Result<Table> {
    let (e, rank) = parse_algebra(&a.delta, a.r)?;
    let delta = expr::normal_form(&e, rank)?;
    let report = genericity_probe(&delta, a.prime, a.m, a.grid_exponent)?;
    let config = json!({
        "command": "generic",
        "delta": delta.to_string(),
        "prime": a.prime,
        "m": a.m,
        "grid_exponent": a.grid_exponent,
    });
    let mut table = Table::new(&["lambda", "first_nonvanishing"], config);
    for row in &report.rows {
        let l: Vec<String> = row.lambda.iter().map(ToString::to_string).collect();
        let f = match row.first_nonvanishing {
            Some(m) => m.to_string(),
            None => format!("vanishes mod {}^{}", a.prime, a.m),
        };
        table.push(vec![format!("({})", l.join(",")), f]);
    }
    let report_json = report.to_json();
    table.summary = Some(json!({
        "n_delta": report_json["n_delta"],
        "witnesses": report_json["witnesses"],
    }));
    Ok(table)
}

fn generator_matrix(spec: &str, p: u64, prec: i64) -> Result<PMatrix2> {
    let (inverse, letter) = match spec.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, spec),
    };
    let mut chars = letter.chars();
    let (Some(c), None) = (chars.next(), chars.next()) else {
        return Err(usage(format!("expected e, f or h, got `{spec}`")));
    };
    let m = exp_p_generator(p, c, prec)?;
    Ok(if inverse { m.inverse()? } else { m })
}

fn fmt_matrix(m: &PMatrix2) -> String {
    let prec = m.precision();
    let cell = |i, j| {
        let x = m.entry(i, j).with_precision(prec);
        match x.residue() {
            Some(r) => r.to_string(),
            None => arith::fmt_rational(&x.to_rational()),
        }
    };
    format!(
        "[[{}, {}], [{}, {}]] mod {}^{}",
        cell(0, 0),
        cell(0, 1),
        cell(1, 0),
        cell(1, 1),
        m.prime(),
        prec
    )
}

pub fn lazard(a: &LazardArgs) -> Result<Table> {
    let prec = a.precision as i64;
    let g = generator_matrix(&a.g, a.prime, prec)?;
    let h = generator_matrix(&a.h, a.prime, prec)?;
    let i_max = a.i_max.unwrap_or((a.precision.saturating_sub(1)) / 2);
    if a.precision <= 2 * i_max {
        return Err(Error::PrecisionExhausted(format!(
            "precision {} supports i ≤ {}, asked for {i_max}",
            a.precision,
            a.precision.saturating_sub(1) / 2
        ))
        .into());
    }
    let (sum_limit, bracket_limit) = lazard_limits(&g, &h)?;
    let bracket_log = bracket_limit.log()?;
    let config = json!({
        "command": "lazard",
        "prime": a.prime,
        "precision": a.precision,
        "g": a.g,
        "h": a.h,
    });
    let mut table = Table::new(
        &["i", "sum", "sum_digits", "bracket", "bracket_digits"],
        config,
    );
    for i in 0..=i_max {
        let approx = lazard_ops(&g, &h, i)?;
        let sum_digits = approx.sum.agreement(&sum_limit);
        let bracket_digits = approx.bracket.log()?.agreement(&bracket_log);
        table.push(vec![
            i.to_string(),
            fmt_matrix(&approx.sum),
            sum_digits.to_string(),
            fmt_matrix(&approx.bracket),
            bracket_digits.to_string(),
        ]);
    }
    table.summary = Some(json!({
        "sum_limit": fmt_matrix(&sum_limit),
        "bracket_limit": fmt_matrix(&bracket_limit),
    }));
    Ok(table)
}
