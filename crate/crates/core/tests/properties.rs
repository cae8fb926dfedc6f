mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use relaygap::cutbounds::{
    ds_cut_value, gaussian_cut_value, gaussian_cutset_bound, ld_capacity, ld_cut_value,
};
use relaygap::gf2linalg::{rank_gf2, shift_matrix};
use relaygap::netmodel::{enumerate_cuts, ComplexGain, Cut, GaussianNetwork, NodeId};
use relaygap::reduction::{ds_depth, ds_reduce_with_depth, ld_reduce};

use common::{ds_conditional_entropy_by_enumeration, random_relabeling, random_small_network, rng};

fn arb_network() -> impl Strategy<Value = GaussianNetwork> {
    (3usize..=6, any::<u64>(), 1i64..=40).prop_map(|(nodes, seed, max)| {
        random_small_network(&mut rng(seed), nodes, max)
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        max_global_rejects: 8192,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn depth_of(net: &GaussianNetwork) -> u32 {
    ds_depth(net.edges().iter().map(|e| e.gain))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn network_json_round_trips(net in arb_network(), rotate in -3.0f64..3.0) {
        // Non-integer components exercise the float round trip too.
        let net = net.map_gains(|e| e.gain.rotate(rotate)).unwrap();
        let text = net.to_json_string().unwrap();
        let back = GaussianNetwork::from_json_str(&text, 1e9).unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn cuts_are_distinct_and_separate_source_from_destination(net in arb_network()) {
        let cuts = enumerate_cuts(&net).unwrap();
        let m = net.num_nodes();
        prop_assert_eq!(cuts.len(), 1usize << (m - 2));
        let distinct = cuts.iter().map(|c| c.omega.clone()).collect::<BTreeSet<_>>();
        prop_assert_eq!(distinct.len(), cuts.len());
        for c in &cuts {
            prop_assert!(c.contains(NodeId(0)));
            prop_assert!(!c.contains(NodeId(m - 1)));
            prop_assert_eq!(c.omega.len() + c.omega_c.len(), m);
        }
    }

    #[test]
    fn shift_matrix_rank_equals_levels(q in 0usize..40, levels in 0usize..40) {
        let levels = levels.min(q);
        prop_assert_eq!(rank_gf2(&shift_matrix(levels, q).unwrap()), levels);
    }

    #[test]
    fn gaussian_cut_values_ignore_per_node_phases(
        net in arb_network(),
        node_seed in any::<u64>(),
        theta in -3.2f64..3.2,
        outgoing in any::<bool>(),
    ) {
        let v = (node_seed as usize) % (net.num_nodes() - 1);
        let rotated = net
            .map_gains(|e| {
                let hit = if outgoing { e.from.0 == v } else { e.to.0 == v };
                if hit { e.gain.rotate(theta) } else { e.gain }
            })
            .unwrap();
        for cut in enumerate_cuts(&net).unwrap() {
            let a = gaussian_cut_value(&net, &cut).unwrap().value_bits;
            let b = gaussian_cut_value(&rotated, &cut).unwrap().value_bits;
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn cut_values_follow_node_relabeling(net in arb_network(), perm_seed in any::<u64>()) {
        let perm = random_relabeling(&mut rng(perm_seed), net.num_nodes());
        let renamed = net.relabel(&perm).unwrap();
        let (ld, ld_renamed) = (ld_reduce(&net), ld_reduce(&renamed));
        for cut in enumerate_cuts(&net).unwrap() {
            let image = cut.relabel(&perm).unwrap();
            let a = gaussian_cut_value(&net, &cut).unwrap().value_bits;
            let b = gaussian_cut_value(&renamed, &image).unwrap().value_bits;
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            prop_assert_eq!(
                ld_cut_value(&ld, &cut).value_bits,
                ld_cut_value(&ld_renamed, &image).value_bits
            );
        }
        let a = gaussian_cutset_bound(&net).unwrap().bound_bits;
        let b = gaussian_cutset_bound(&renamed).unwrap().bound_bits;
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        prop_assert_eq!(ld_capacity(&ld).unwrap().bound_bits, ld_capacity(&ld_renamed).unwrap().bound_bits);
    }

    #[test]
    fn scaling_all_gains_up_never_lowers_gaussian_cuts(net in arb_network(), factor in 1.0f64..16.0) {
        let scaled = net
            .map_gains(|e| ComplexGain::new(e.gain.re * factor, e.gain.im * factor))
            .unwrap();
        for cut in enumerate_cuts(&net).unwrap() {
            let a = gaussian_cut_value(&net, &cut).unwrap().value_bits;
            let b = gaussian_cut_value(&scaled, &cut).unwrap().value_bits;
            prop_assert!(b >= a - 1e-9);
        }
    }
}

/// A link from a source-side node into a destination-side node adds a fresh
/// column to the cut matrix when its sender had no other crossing link, or a
/// fresh row when its receiver had none. Either way no cut value can drop.
fn fresh_link_case(net: &GaussianNetwork, cut: &Cut, from: usize, to: usize, gain: ComplexGain) -> Option<GaussianNetwork> {
    if !cut.contains(NodeId(from)) || cut.contains(NodeId(to)) || from == to {
        return None;
    }
    let crossing = cut.crossing_edges(net).collect::<Vec<_>>();
    let fresh_column = crossing.iter().all(|e| e.from.0 != from);
    let fresh_row = crossing.iter().all(|e| e.to.0 != to);
    if !(fresh_column || fresh_row) || net.gain(NodeId(from), NodeId(to)).is_some() {
        return None;
    }
    net.with_edge(from, to, gain).ok()
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn fresh_row_or_column_never_lowers_a_cut(
        seed in any::<u64>(),
        nodes in 3usize..=4,
        mask in any::<u32>(),
        from in 0usize..4,
        to in 1usize..4,
        re in -3i64..=3,
        im in -3i64..=3,
    ) {
        prop_assume!(re != 0 || im != 0);
        let net = random_small_network(&mut rng(seed), nodes, 3);
        let cut = Cut::from_bitmask(nodes, mask % (1 << (nodes - 2))).unwrap();
        let (from, to) = (from % nodes, to % nodes);
        let gain = ComplexGain::new(re as f64, im as f64);
        let bigger = fresh_link_case(&net, &cut, from, to, gain);
        prop_assume!(bigger.is_some());
        let bigger = bigger.unwrap();

        let before = gaussian_cut_value(&net, &cut).unwrap().value_bits;
        let after = gaussian_cut_value(&bigger, &cut).unwrap().value_bits;
        prop_assert!(after >= before - 1e-9, "gaussian {before} -> {after}");

        let before = ld_cut_value(&ld_reduce(&net), &cut).value_bits;
        let after = ld_cut_value(&ld_reduce(&bigger), &cut).value_bits;
        prop_assert!(after >= before, "ld {before} -> {after}");

        // Same depth on both sides so the input alphabets agree.
        let n = depth_of(&net).max(depth_of(&bigger));
        let before = ds_cut_value(&ds_reduce_with_depth(&net, n).unwrap(), &cut).unwrap().value_bits;
        let after = ds_cut_value(&ds_reduce_with_depth(&bigger, n).unwrap(), &cut).unwrap().value_bits;
        prop_assert!(after >= before - 1e-9, "ds {before} -> {after}");
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn ds_cut_value_matches_whole_network_enumeration(
        seed in any::<u64>(),
        nodes in 3usize..=4,
        max in 1i64..=7,
        perm_seed in any::<u64>(),
    ) {
        let net = random_small_network(&mut rng(seed), nodes, max);
        let n = depth_of(&net);
        prop_assume!(2 * n as usize * (nodes - 1) <= 22);
        let ds = ds_reduce_with_depth(&net, n).unwrap();
        let perm = random_relabeling(&mut rng(perm_seed), nodes);
        let renamed = ds_reduce_with_depth(&net.relabel(&perm).unwrap(), n).unwrap();
        for cut in enumerate_cuts(&net).unwrap() {
            let fast = ds_cut_value(&ds, &cut).unwrap().value_bits;
            let oracle = ds_conditional_entropy_by_enumeration(&renamed, &cut.relabel(&perm).unwrap());
            prop_assert!((fast - oracle).abs() <= 1e-12 * fast.max(1.0), "{cut}: {fast} vs {oracle}");
        }
    }
}
