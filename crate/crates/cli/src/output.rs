//! Reports: a human table for the terminal and a JSON value for `--json`.

use std::process::ExitCode;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::Config;

pub struct Outcome {
    pub human: String,
    pub json: Value,
    /// `false` turns the exit code into 2.
    pub verified: bool,
}

impl Outcome {
    pub fn new(human: String, json: impl Serialize) -> Self {
        Outcome {
            human,
            json: to_value(json),
            verified: true,
        }
    }

    pub fn checked(human: String, json: impl Serialize, verified: bool) -> Self {
        Outcome {
            human,
            json: to_value(json),
            verified,
        }
    }

    pub fn emit(&self, config: &Config) -> ExitCode {
        if config.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&self.json).expect("reports serialize")
            );
        } else {
            println!("{}", self.human.trim_end());
        }
        if self.verified {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        }
    }
}

fn to_value(json: impl Serialize) -> Value {
    serde_json::to_value(json).expect("reports serialize")
}

/// `0.0` for `-0.0`, so printed values do not depend on the sign of zero.
fn unsigned_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn real(x: f64, precision: usize) -> String {
    format!("{:.precision$}", unsigned_zero(x))
}

pub fn complex(z: Complex64, precision: usize) -> String {
    if z.im == 0.0 {
        return real(z.re, precision);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!(
        "{}{sign}{}i",
        real(z.re, precision),
        real(z.im.abs(), precision)
    )
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}
