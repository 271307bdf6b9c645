use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::TestFunction;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// On-disk form of a test function; only nonzero coefficients are listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionJson {
    pub p: u64,
    pub n: usize,
    pub l: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub m: Vec<u64>,
    pub re: f64,
    pub im: f64,
}

fn positive_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub(super) fn to_json(f: &TestFunction) -> TestFunctionJson {
    let g = f.grid;
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| CoeffJson {
            m: g.multi_index(i),
            re: positive_zero(c.re),
            im: positive_zero(c.im),
        })
        .collect();
    TestFunctionJson {
        p: g.p,
        n: g.n,
        l: g.l,
        big_n: g.big_n,
        coeffs,
    }
}

pub(super) fn from_json(json: &TestFunctionJson) -> Result<TestFunction> {
    let grid = Grid::new(json.p, json.n, json.l, json.big_n)?;
    let mut f = TestFunction::zeros(grid);
    let side = grid.side() as u64;
    for c in &json.coeffs {
        if c.m.len() != grid.n || c.m.iter().any(|&m| m >= side) {
            return Err(Error::Parse(format!(
                "coset index {:?} is not valid on this grid",
                c.m
            )));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Parse("coefficients must be finite".into()));
        }
        let i = grid.flat_index(&c.m);
        f.coeffs[i] += Complex64::new(c.re, c.im);
    }
    Ok(f)
}
