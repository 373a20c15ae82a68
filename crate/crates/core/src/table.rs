//! Per-signature tables of `τ`, `δ` and the `δ − τ` gap on rows `(l,0,…,0)`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::Result;
use crate::number::Value;
use crate::signatures::{enumerate_signatures, Signature};
use crate::spectral;
use crate::weights::WeightSequence;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub s: Signature,
    pub tau: Value,
    pub delta: Value,
    pub delta_source: &'static str,
    pub eta_derived: Option<Value>,
    pub eta_printed: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub domain: DomainSpec,
    pub weights: String,
    pub max_weight: u64,
    pub rows: Vec<TableRow>,
}

fn is_row(s: &Signature) -> bool {
    s.parts()[1..].iter().all(|&p| p == 0)
}

fn row(s: Signature, w: &WeightSequence) -> Result<TableRow> {
    let tau = spectral::tau(&s, w)?;
    let delta = spectral::delta(&s, w)?;
    let (eta_derived, eta_printed) = if is_row(&s) {
        match w.parametric_nu() {
            Some(nu) => {
                let gap = spectral::eta_gap(s.part(1), &nu, w.domain())?;
                (Some(Value::Exact(gap.derived)), Some(Value::Exact(gap.printed)))
            }
            None => (Some(Value::Exact(&delta.value - &tau.value)), None),
        }
    } else {
        (None, None)
    };
    Ok(TableRow { s, tau: Value::Exact(tau.value), delta: Value::Exact(delta.value), delta_source: delta.tag.as_str(), eta_derived, eta_printed })
}

pub fn build_table(w: &WeightSequence, max_weight: u64) -> Result<Table> {
    let signatures: Vec<Signature> = enumerate_signatures(w.domain().rank(), max_weight).collect();
    let rows = signatures.into_par_iter().map(|s| row(s, w)).collect::<Result<Vec<_>>>()?;
    Ok(Table { domain: w.domain().clone(), weights: w.to_string(), max_weight, rows })
}

fn cell(v: &Option<Value>) -> String {
    v.as_ref().map(|x| crate::number::round15(x.to_f64()).to_string()).unwrap_or_default()
}

impl Table {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = (1..=self.domain.rank()).map(|j| format!("s{j}")).collect();
        h.extend(["tau", "delta", "delta_source", "eta_derived", "eta_printed"].map(String::from));
        h
    }

    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut c: Vec<String> = r.s.parts().iter().map(u32::to_string).collect();
                c.push(cell(&Some(r.tau.clone())));
                c.push(cell(&Some(r.delta.clone())));
                c.push(r.delta_source.to_string());
                c.push(cell(&r.eta_derived));
                c.push(cell(&r.eta_printed));
                c
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for c in self.cells() {
            out.push_str(&c.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let header = self.header();
        let cells = self.cells();
        let widths: Vec<usize> = (0..header.len())
            .map(|k| cells.iter().map(|c| c[k].chars().count()).chain([header[k].len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "# {} {} |s| ≤ {}", self.domain, self.weights, self.max_weight);
        for line in std::iter::once(&header).chain(cells.iter()) {
            let padded: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        }
        out
    }
}
