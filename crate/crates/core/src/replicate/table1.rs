//! Perfect bases of small generalized Gabidulin codes `G_{k,1} ⊂ L_{n,q}`.
//!
//! A pair `(i, j)` stands for `η^i Tr(η^j x)` with `η` a root of the row's modulus.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldSpec};
use crate::linpoly::Algebra;
use crate::rankcode::gabidulin;
use crate::search::{verify_perfect_basis, BasisReport, RankOneLine};

const TABLE1_JSON: &str = include_str!("../../data/table1.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MtrFlag {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: u32,
    pub k: u32,
    pub q: u32,
    pub s: u32,
    pub trk_low: usize,
    pub trk_high: usize,
    pub mtr: MtrFlag,
    pub field: FieldSpec,
    pub basis: Vec<RankOneLine>,
}

#[derive(Deserialize)]
struct Table1Doc {
    version: u32,
    rows: Vec<Table1Row>,
}

pub const TABLE1_VERSION: u32 = 1;

/// Rows whose printed basis is rank-one and independent but does not contain
/// the code under any primitive modulus or with `(i, j)` swapped. Row (4,3,2)
/// verifies once `(4,4)` reads `(4,14)`; the other two survive no one- or
/// two-line replacement.
pub const KNOWN_BAD_ROWS: [(u32, u32, u32); 3] = [(4, 2, 3), (4, 2, 4), (4, 3, 2)];

pub fn table1_rows() -> Vec<Table1Row> {
    let doc: Table1Doc = serde_json::from_str(TABLE1_JSON).expect("embedded table is valid JSON");
    assert_eq!(doc.version, TABLE1_VERSION);
    doc.rows
}

pub fn find_row(n: u32, k: u32, q: u32) -> Option<Table1Row> {
    table1_rows().into_iter().find(|r| r.n == n && r.k == k && r.q == q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub n: u32,
    pub k: u32,
    pub q: u32,
    pub basis: BasisReport,
    pub mtr_expected: MtrFlag,
    pub mtr_computed: MtrFlag,
    pub failures: Vec<String>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// MTR flag implied by the bounds and the Kruskal bound.
pub fn mtr_flag(trk_low: usize, trk_high: usize, kruskal: usize) -> MtrFlag {
    if trk_high == kruskal {
        MtrFlag::Yes
    } else if trk_low > kruskal || trk_low == trk_high {
        MtrFlag::No
    } else {
        MtrFlag::Unknown
    }
}

pub fn row_algebra(row: &Table1Row) -> Result<Arc<Algebra>> {
    if row.field.q() != row.q as u64 || row.field.n != row.n {
        return Err(Error::BadSpec(format!(
            "row ({},{},{}) does not match its field spec",
            row.n, row.k, row.q
        )));
    }
    Algebra::new(Arc::new(Field::build(row.field.clone())?))
}

pub fn verify_row(row: &Table1Row) -> Result<RowReport> {
    let alg = row_algebra(row)?;
    let code = gabidulin(&alg, row.k as usize, row.s as usize)?;
    let order = alg.field().group_order();
    let mut failures = Vec::new();
    if let Some(l) = row.basis.iter().find(|l| l.i >= order || l.j >= order) {
        failures.push(format!("exponent out of range in {l}"));
    }
    let basis = verify_perfect_basis(&code, &row.basis)?;
    failures.extend(basis.failures.iter().cloned());
    if row.basis.len() != row.trk_high {
        failures.push(format!("basis has {} lines, tensor rank bound is {}", row.basis.len(), row.trk_high));
    }
    if row.trk_low < basis.kruskal {
        failures.push(format!("lower bound {} below Kruskal bound {}", row.trk_low, basis.kruskal));
    }
    let mtr_computed = mtr_flag(row.trk_low, row.basis.len(), basis.kruskal);
    if mtr_computed != row.mtr {
        failures.push(format!("MTR flag {:?}, computed {:?}", row.mtr, mtr_computed));
    }
    Ok(RowReport {
        n: row.n,
        k: row.k,
        q: row.q,
        basis,
        mtr_expected: row.mtr,
        mtr_computed,
        failures,
    })
}

pub fn verify_table() -> Result<Vec<RowReport>> {
    table1_rows().par_iter().map(verify_row).collect()
}
