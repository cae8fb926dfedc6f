//! Entropy and mutual-information building blocks: the integer part of a
//! standard normal, a closed-form Gaussian cut, and a discrete-input MIMO
//! estimate.

use std::error::Error;

use nalgebra::DMatrix;
use relaygap::infotheory::{
    discrete_entropy, gaussian_mi_closed_form, mimo_mi_discrete_input, normal_integer_part_pmf, CutMatrix,
    DiscreteInput,
};

pub fn main() -> Result<(), Box<dyn Error>> {
    let pmf = normal_integer_part_pmf(40)?;
    println!("H(trunc(Z)) = {:.6} bits", discrete_entropy(&pmf));

    let h = DMatrix::from_row_slice(2, 2, &[3.0, -1.0, 1.0, 2.0]);
    println!("Gaussian-input I = {:.4} bits", gaussian_mi_closed_form(&CutMatrix::Real(h.clone())));

    let bpsk = vec![(-1.0, 0.5), (1.0, 0.5)];
    let input = DiscreteInput::product(&[bpsk.clone(), bpsk])?;
    let est = mimo_mi_discrete_input(&h, &input, 1.0, 50_000, 1)?;
    println!(
        "BPSK-input I = {:.4} ± {:.4} bits ({:?}, {} samples, {:?})",
        est.value_bits, est.std_error_bits, est.method, est.samples, est.rng
    );
    Ok(())
}
