//! Serialized forms of the pipeline stages.

use std::fmt::Write as _;

use bezroots::bezmat::BezoutFamily;
use bezroots::linalg::CMatrix;
use bezroots::poly::format_poly;
use bezroots::reduce::{RankReport, ReducedFamily, Transform};
use bezroots::solve::{CompanionSet, Histogram, RootSet};
use bezroots::C64;
use serde::{Deserialize, Serialize};

use crate::system::y_name;

pub type Pair = [f64; 2];

fn pair(z: &C64) -> Pair {
    [z.re, z.im]
}

fn unpair(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

/// Dense matrix as rows of `[re, im]` pairs.
pub fn matrix_json(m: &CMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(pair).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<Pair>]) -> CMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(rows.len(), cols, |i, j| unpair(&rows[i][j]))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilyDump {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// `B(1), B(x_1), ..., B(x_n)`.
    pub matrices: Vec<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<Vec<String>>,
}

impl FamilyDump {
    pub fn new(fam: &BezoutFamily, names: &[String]) -> Self {
        let ynames: Vec<String> = names.iter().map(|s| y_name(s)).collect();
        FamilyDump {
            row_labels: fam
                .row_labels
                .iter()
                .map(|p| format_poly(p, names))
                .collect(),
            col_labels: fam
                .col_labels
                .iter()
                .map(|p| format_poly(p, &ynames))
                .collect(),
            matrices: fam.matrices.iter().map(matrix_json).collect(),
            relations: None,
            log: None,
        }
    }

    pub fn reduced(red: &ReducedFamily, names: &[String]) -> Self {
        let mut d = Self::new(&red.family, names);
        d.relations = Some(
            red.relations
                .iter()
                .map(|p| format_poly(p, names))
                .collect(),
        );
        d.log = Some(
            red.log
                .iter()
                .map(|t| match t {
                    Transform::Deflate { rows, cols } => format!("deflate rows={rows} cols={cols}"),
                    Transform::Step { col, row, k } => format!("step col={col} row={row} k={k}"),
                })
                .collect(),
        );
        d
    }

    pub fn matrix(&self, k: usize) -> CMatrix {
        matrix_from_json(&self.matrices[k])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CompanionDump {
    pub matrices: Vec<Vec<Vec<Pair>>>,
    pub commutation_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rcond: Option<f64>,
}

impl CompanionDump {
    pub fn new(cs: &CompanionSet) -> Self {
        CompanionDump {
            matrices: cs.matrices.iter().map(matrix_json).collect(),
            commutation_error: cs.commutation_error(),
            rcond: cs.warning.map(|w| w.rcond),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RootDump {
    pub x: Vec<Pair>,
    pub residuals: Vec<f64>,
    pub multiplicity: usize,
}

pub fn roots_json(rs: &RootSet) -> Vec<RootDump> {
    rs.roots
        .iter()
        .map(|r| RootDump {
            x: r.x.iter().map(pair).collect(),
            residuals: r.residuals.clone(),
            multiplicity: r.multiplicity,
        })
        .collect()
}

pub fn histogram_csv(h: &Histogram) -> String {
    let mut s = String::from("bin_left,bin_right,count\n");
    for (k, c) in h.counts.iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", h.edges[k], h.edges[k + 1], c);
    }
    s
}

/// One line per diagonal entry of the pivoted QR.
pub fn rank_csv(r: &RankReport) -> String {
    let mut block_of = vec![0usize; r.diag.len()];
    if let Some(bs) = &r.blocks {
        for (b, range) in bs.iter().enumerate() {
            for k in range.clone() {
                block_of[k] = b;
            }
        }
    }
    let mut s = String::from("index,magnitude,above_threshold,block\n");
    for (k, d) in r.diag.iter().enumerate() {
        let _ = writeln!(
            s,
            "{k},{d:e},{},{}",
            u8::from(*d > r.threshold),
            block_of[k]
        );
    }
    s
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RankSummary {
    pub size: [usize; 2],
    pub rank: usize,
    pub threshold: f64,
    pub span_decades: f64,
    pub blocks: usize,
}

impl RankSummary {
    pub fn new(m: &CMatrix, r: &RankReport) -> Self {
        RankSummary {
            size: [m.rows(), m.cols()],
            rank: r.rank,
            threshold: r.threshold,
            span_decades: r.span_decades(),
            blocks: r.blocks.as_ref().map_or(1, Vec::len),
        }
    }
}
