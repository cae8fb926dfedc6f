//! Reduces the two-transmitter, two-receiver network to its linear
//! deterministic model and prints the transfer matrix of one cut.

use std::error::Error;

use relaygap::cutbounds::{gaussian_cutset_bound, ld_capacity};
use relaygap::gf2linalg::{cut_transfer_matrix_ld, rank_gf2};
use relaygap::reduction::ld_reduce;
use relaygap::topologies::two_transmitter;
use relaygap::Cut;

pub fn main() -> Result<(), Box<dyn Error>> {
    let net = two_transmitter();
    let ld = ld_reduce(&net);
    println!("q = {}", ld.q);
    for e in &ld.edges {
        println!("  {} -> {}: {} levels", e.from, e.to, e.levels);
    }

    let cut = Cut::from_omega(net.num_nodes(), &[0, 1])?;
    let g = cut_transfer_matrix_ld(&ld, &cut);
    println!("transfer matrix of {cut}:\n{g}rank {}", rank_gf2(&g));

    println!("LD capacity      {:.3} bits", ld_capacity(&ld)?.bound_bits);
    println!("Gaussian cut bound {:.3} bits", gaussian_cutset_bound(&net)?.bound_bits);
    Ok(())
}
