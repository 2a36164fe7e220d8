//! CSV views of a bundle and bundle comparison.
//!
//! Schemas (one header line, then rows; enclosure endpoints carry 17 significant digits,
//! rounded outward):
//!
//! - `psi`: `H,psi_lo,psi_hi,witness,strategy`
//! - `records`: `H,value_lo,value_hi,poly,strategy`
//! - `star`: `H,psi_star_lo,psi_star_hi,witness`
//! - `star-records`: `H,distance_lo,distance_hi,alpha`
//! - `bounds`: the per-degree constants table, 10 decimals.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DegreeResult, EstimateView, ResultBundle};
use crate::bounds::constants_csv;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Psi(usize),
    Records(usize),
    Star(usize),
    StarRecords(usize),
    Bounds,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKind::Psi(n) => write!(f, "psi_n{n}"),
            TableKind::Records(n) => write!(f, "records_n{n}"),
            TableKind::Star(n) => write!(f, "star_n{n}"),
            TableKind::StarRecords(n) => write!(f, "star_records_n{n}"),
            TableKind::Bounds => f.write_str("bounds"),
        }
    }
}

impl TableKind {
    /// `which` is one of `psi`, `records`, `star`, `star-records`, `bounds`.
    pub fn parse(which: &str, n: Option<usize>) -> Result<Self> {
        let need = || n.ok_or_else(|| Error::Parse(format!("table {which} needs a degree")));
        Ok(match which {
            "psi" => TableKind::Psi(need()?),
            "records" => TableKind::Records(need()?),
            "star" => TableKind::Star(need()?),
            "star-records" => TableKind::StarRecords(need()?),
            "bounds" => TableKind::Bounds,
            _ => return Err(Error::Parse(format!("unknown table {which}"))),
        })
    }
}

impl FromStr for TableKind {
    type Err = Error;

    /// `psi:2`, `records:1`, `star:3`, `star-records:3` or `bounds`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((w, n)) => {
                let n = n.parse().map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
                TableKind::parse(w, Some(n))
            }
            None => TableKind::parse(s, None),
        }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn degree(bundle: &ResultBundle, which: TableKind, n: usize) -> Result<&DegreeResult> {
    bundle.degree(n).ok_or_else(|| Error::MissingTable(which.to_string()))
}

/// CSV text of one table of the bundle.
pub fn table_export(bundle: &ResultBundle, which: TableKind) -> Result<String> {
    let missing = || Error::MissingTable(which.to_string());
    Ok(match which {
        TableKind::Psi(n) => {
            let d = degree(bundle, which, n)?;
            csv_text(
                &["H", "psi_lo", "psi_hi", "witness", "strategy"],
                d.table.iter().map(|r| vec![r.h.to_string(), r.psi.lo.clone(), r.psi.hi.clone(), r.witness.clone(), r.source.clone()]),
            )
        }
        TableKind::Records(n) => {
            let d = degree(bundle, which, n)?;
            csv_text(
                &["H", "value_lo", "value_hi", "poly", "strategy"],
                d.records.iter().map(|r| vec![r.height.to_string(), r.value.lo.clone(), r.value.hi.clone(), r.poly.clone(), r.source.clone()]),
            )
        }
        TableKind::Star(n) => {
            let s = degree(bundle, which, n)?.star.as_ref().ok_or_else(missing)?;
            csv_text(
                &["H", "psi_star_lo", "psi_star_hi", "witness"],
                s.table.iter().map(|r| vec![r.h.to_string(), r.psi_star.lo.clone(), r.psi_star.hi.clone(), r.witness.clone()]),
            )
        }
        TableKind::StarRecords(n) => {
            let s = degree(bundle, which, n)?.star.as_ref().ok_or_else(missing)?;
            csv_text(
                &["H", "distance_lo", "distance_hi", "alpha"],
                s.records.iter().map(|r| vec![r.height.to_string(), r.distance.lo.clone(), r.distance.hi.clone(), r.alpha.clone()]),
            )
        }
        TableKind::Bounds => {
            let mut ns: Vec<u32> = bundle.config.degrees.iter().map(|&n| n as u32).collect();
            ns.sort_unstable();
            ns.dedup();
            constants_csv(ns, 10)
        }
    })
}

/// Every table the bundle holds, as `<name>.csv` files in `dir`.
pub fn write_sidecars(bundle: &ResultBundle, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut kinds = vec![TableKind::Bounds];
    for d in &bundle.degrees {
        kinds.push(TableKind::Psi(d.n));
        kinds.push(TableKind::Records(d.n));
        if d.star.is_some() {
            kinds.push(TableKind::Star(d.n));
            kinds.push(TableKind::StarRecords(d.n));
        }
    }
    let mut out = Vec::new();
    for k in kinds {
        let path = dir.join(format!("{k}.csv"));
        std::fs::write(&path, table_export(bundle, k)?)?;
        out.push(path);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub n: usize,
    /// `psi`, `record`, `ordinary`, `uniform`, `star`, ...
    pub what: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    pub left: String,
    pub right: String,
    /// Difference of the upper endpoints (right minus left) where numeric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub witness_differs: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BundleDiff {
    pub entries: Vec<DiffEntry>,
    /// Both runs used the same strategy and budgets.
    pub same_settings: bool,
}

impl BundleDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Witnesses differ although nothing in the settings explains it.
    pub fn is_failure(&self) -> bool {
        self.same_settings && self.entries.iter().any(|e| e.witness_differs)
    }
}

fn delta(a: &str, b: &str) -> Option<f64> {
    let (x, y) = (a.parse::<f64>().ok()?, b.parse::<f64>().ok()?);
    Some(y - x)
}

fn estimate_entry(n: usize, what: &str, a: &Option<EstimateView>, b: &Option<EstimateView>) -> Option<DiffEntry> {
    if a == b {
        return None;
    }
    let show = |e: &Option<EstimateView>| e.as_ref().map_or("-".to_string(), |e| e.point.to_string());
    let d = match (a, b) {
        (Some(x), Some(y)) => Some(y.point - x.point),
        _ => None,
    };
    Some(DiffEntry { n, what: what.into(), h: None, left: show(a), right: show(b), delta: d, witness_differs: false })
}

/// Row-by-row differences between two bundles of the same target and degrees.
pub fn compare(a: &ResultBundle, b: &ResultBundle) -> Result<BundleDiff> {
    if a.target != b.target {
        return Err(Error::IncompatibleBundles(format!("targets {} and {}", a.target, b.target)));
    }
    let (da, db): (Vec<usize>, Vec<usize>) = (a.degrees.iter().map(|d| d.n).collect(), b.degrees.iter().map(|d| d.n).collect());
    if da != db {
        return Err(Error::IncompatibleBundles(format!("degrees {da:?} and {db:?}")));
    }
    let (ca, cb) = (&a.config, &b.config);
    let same_settings = ca.strategy == cb.strategy
        && ca.enumeration_budget == cb.enumeration_budget
        && ca.precision_cap == cb.precision_cap
        && ca.lattice_scale_cap == cb.lattice_scale_cap;
    let mut entries = Vec::new();
    for (x, y) in a.degrees.iter().zip(&b.degrees) {
        let n = x.n;
        for r in &x.table {
            let Some(s) = y.table.iter().find(|s| s.h == r.h) else { continue };
            if r != s {
                entries.push(DiffEntry {
                    n,
                    what: "psi".into(),
                    h: Some(r.h),
                    left: format!("{} {}", r.witness, r.psi.hi),
                    right: format!("{} {}", s.witness, s.psi.hi),
                    delta: delta(&r.psi.hi, &s.psi.hi),
                    witness_differs: r.witness != s.witness,
                });
            }
        }
        let recs = |d: &DegreeResult| d.records.iter().map(|r| format!("{}:{}", r.height, r.poly)).collect::<Vec<_>>().join(" ");
        if recs(x) != recs(y) {
            let witness_differs = x.records.iter().zip(&y.records).any(|(p, q)| p.height == q.height && p.poly != q.poly);
            entries.push(DiffEntry { n, what: "records".into(), h: None, left: recs(x), right: recs(y), delta: None, witness_differs });
        }
        entries.extend(estimate_entry(n, "ordinary", &x.ordinary, &y.ordinary));
        entries.extend(estimate_entry(n, "uniform", &x.uniform, &y.uniform));
        if let (Some(sx), Some(sy)) = (&x.star, &y.star) {
            for r in &sx.table {
                let Some(s) = sy.table.iter().find(|s| s.h == r.h) else { continue };
                if r != s {
                    entries.push(DiffEntry {
                        n,
                        what: "star".into(),
                        h: Some(r.h),
                        left: format!("{} {}", r.witness, r.psi_star.hi),
                        right: format!("{} {}", s.witness, s.psi_star.hi),
                        delta: delta(&r.psi_star.hi, &s.psi_star.hi),
                        witness_differs: r.witness != s.witness,
                    });
                }
            }
            entries.extend(estimate_entry(n, "star-ordinary", &sx.ordinary, &sy.ordinary));
            entries.extend(estimate_entry(n, "star-uniform", &sx.uniform, &sy.uniform));
        }
    }
    Ok(BundleDiff { entries, same_settings })
}
