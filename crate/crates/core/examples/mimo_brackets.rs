//! Point-to-point MIMO channel `[[h, -h], [h, h]]` with `h = 16`: the LD
//! capacity falls well short of the Gaussian one while the DS capacity stays
//! within a constant.

use std::error::Error;

use nalgebra::{Complex, DMatrix};
use relaygap::experiments::exp_mimo;

pub fn main() -> Result<(), Box<dyn Error>> {
    let h = 16.0;
    let m = DMatrix::from_row_slice(2, 2, &[h, -h, h, h]).map(|x| Complex::new(x, 0.0));
    let report = exp_mimo(&m, None, 0)?;
    let s = &report.points[0].series[0];
    println!("Gaussian {:.4}  LD {}  DS {:?}", s.gaussian_bits, s.ld_bits, s.ds_bits);
    for c in &report.checks {
        println!("{:<28} passed {} ({})", c.name, c.passed, c.detail);
    }
    Ok(())
}
