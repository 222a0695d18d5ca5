mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttp_core::annealer::random_drr;
use ttp_core::neighborhood::*;
use ttp_core::schedule::{Schedule, Venue};
use ttp_core::{is_double_round_robin, parse_schedule, total_distance, violations, Instance};

use Venue::{Away, Home};

fn chain8() -> (Instance<i64>, Schedule) {
    let names = letters(8);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let inst = named_zero_instance(&names);
    let s = parse_schedule(&read_fixture("chain8.txt"), &inst).unwrap();
    (inst, s)
}

fn galaxy10_best() -> (Instance<i64>, Schedule) {
    let inst = named_zero_instance(&GALAXY10_NAMES);
    let s = parse_schedule(&read_fixture("galaxy10_best.txt"), &inst).unwrap();
    (inst, s)
}

fn g(tok: &str) -> (usize, Venue) {
    match tok.strip_prefix('@') {
        Some(x) => (team(x.chars().next().unwrap()), Away),
        None => (team(tok.chars().next().unwrap()), Home),
    }
}

fn games(list: &str) -> Vec<(usize, Venue)> {
    list.split(' ').map(g).collect()
}

const CHAIN_LIST: &str = "@H G @E F @G H @D E @F C";
const CHAIN_ROUNDS: [usize; 10] = [1, 13, 5, 10, 4, 12, 6, 9, 3, 11];
const EXIT_LIST: &str = "A B C D E @A @F B C D E F";

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn chain8_fixture_matches_backtracking_completion() {
    let (_, s) = chain8();
    assert_eq!(complete_chain8().unwrap(), s);
    let [a, b] = chain8_columns();
    for r in 0..14 {
        assert_eq!(s.game(0, r), a[r]);
        assert_eq!(s.game(1, r), b[r]);
    }
    assert!(drr_oracle(&s));
    assert!(is_double_round_robin(&s));
}

#[test]
fn chain8_swaplist() {
    let (_, s) = chain8();
    let snapshot = s.clone();
    let sl = simulate_pst(&s, team('A'), team('B'), 1).unwrap();
    assert_eq!(s, snapshot);
    assert_eq!(sl.owner(), team('B'));
    assert_eq!(sl.games(), games(CHAIN_LIST));
    assert_eq!(sl.rounds(), CHAIN_ROUNDS);
}

#[test]
fn pst_touches_only_the_swap_sequence() {
    let (_, s) = chain8();
    let out = partial_swap_teams_traced(&s, team('A'), team('B'), 1, false, &mut rng(0)).unwrap();
    assert_eq!(out.exchanges(), 10);
    assert!(!out.early_exit);
    let changed: HashSet<usize> = (0..14)
        .filter(|&r| out.schedule.game(0, r) != s.game(0, r) || out.schedule.game(1, r) != s.game(1, r))
        .collect();
    assert_eq!(changed, CHAIN_ROUNDS.into_iter().collect());
    // Outside the sequence every team's games are untouched.
    for r in (0..14).filter(|r| !changed.contains(r)) {
        for t in 0..8 {
            assert_eq!(out.schedule.game(t, r), s.game(t, r));
        }
    }
    assert!(is_double_round_robin(&out.schedule));
    // A and B have exchanged their games in every round of the sequence.
    for r in CHAIN_ROUNDS {
        assert_eq!(out.schedule.game(0, r), s.game(1, r));
        assert_eq!(out.schedule.game(1, r), s.game(0, r));
    }
}

#[test]
fn precondition_shortens_the_chain() {
    let (_, s) = chain8();
    let pre = swap_homes(&s, team('B'), team('E')).unwrap();
    assert_eq!(pre.game(1, 5), (team('E'), Home));
    assert_eq!(pre.game(1, 9), (team('E'), Away));
    let sl = simulate_pst(&pre, team('A'), team('B'), 1).unwrap();
    assert_eq!(sl.rounds(), [1, 13, 5, 3, 11]);
}

#[test]
fn lpst_with_e_restores_round_9() {
    let (_, s) = chain8();
    let sl = simulate_pst(&s, team('A'), team('B'), 1).unwrap();
    let plan = LookaheadPlan::lookahead_on(&sl, team('E'), 0.0).unwrap();
    assert_eq!(plan.gap(), Some(5));
    assert_eq!(plan.predicted_swaps, 5);
    let out = execute_plan(&s, team('A'), team('B'), 1, &plan, &mut rng(1)).unwrap();
    assert_eq!(out.exchanged_rounds, [1, 13, 5, 3, 11]);
    for t in 0..8 {
        assert_eq!(out.schedule.game(t, 9), s.game(t, 9));
    }
    assert!(is_double_round_robin(&out.schedule));
}

#[test]
fn widest_gaps_give_three_schedules() {
    let (_, s) = chain8();
    let sl = simulate_pst(&s, team('A'), team('B'), 1).unwrap();
    let mut outs = HashSet::new();
    for t in ['H', 'E', 'F'] {
        let plan = LookaheadPlan::lookahead_on(&sl, team(t), 0.0).unwrap();
        let out = execute_plan(&s, team('A'), team('B'), 1, &plan, &mut rng(2)).unwrap();
        assert_eq!(out.exchanges(), 5, "look-ahead {t}");
        assert!(is_double_round_robin(&out.schedule));
        outs.insert(out.schedule);
    }
    assert_eq!(outs.len(), 3);
}

#[test]
fn widest_gap_candidates_and_uniform_ties() {
    let sl = SwapList::from_games(team('B'), games(CHAIN_LIST));
    let cands = sl.lookahead_candidates();
    let max_gap = cands.iter().map(|c| c.gap()).max().unwrap();
    assert_eq!(max_gap, 5);
    let top: HashSet<char> = cands
        .iter()
        .filter(|c| c.gap() == max_gap)
        .map(|c| (b'A' + c.team as u8) as char)
        .collect();
    assert_eq!(top, HashSet::from(['H', 'E', 'F']));
    assert_eq!(sl.early_exit_index(), None);

    let mut counts = [0usize; 8];
    let mut r = rng(3);
    let trials = 10_000;
    for _ in 0..trials {
        let plan = select_plan(&sl, 0.0, 0.0, &mut r);
        assert_eq!(plan.predicted_swaps, 5);
        assert_eq!(plan.early_exit, None);
        counts[plan.lookahead.unwrap().team] += 1;
    }
    for t in ['H', 'E', 'F'] {
        let f = counts[team(t)] as f64 / trials as f64;
        assert!((f - 1.0 / 3.0).abs() < 0.03, "{t}: {f}");
    }
}

#[test]
fn lookahead_with_early_exit_planning() {
    let sl = SwapList::from_games(7, games(EXIT_LIST));
    assert_eq!(sl.early_exit_index(), Some(6));

    // A costly exit leaves the gap-6 opponents.
    let mut r = rng(4);
    for _ in 0..200 {
        let plan = select_plan(&sl, 0.0, 10.0, &mut r);
        let la = plan.lookahead.unwrap();
        assert!(['B', 'C', 'D', 'E'].contains(&((b'A' + la.team as u8) as char)));
        assert_eq!(la.gap(), 6);
        assert_eq!(plan.predicted_swaps, 6);
    }

    // Free penalties: look ahead on A and stop at @F after two exchanges.
    let plan = select_plan(&sl, 0.0, 0.0, &mut r);
    assert_eq!(plan.lookahead.map(|l| (l.team, l.gap())), Some((team('A'), 5)));
    assert_eq!(plan.early_exit, Some(6));
    assert_eq!(plan.predicted_swaps, 2);

    // Same when the gap-6 opponents are ruled out.
    let gap6 = [team('B'), team('C'), team('D'), team('E')];
    let plan = select_plan_with(
        &sl,
        PlanPenalties { look: 0.0, exit: 0.0 },
        |t| !gap6.contains(&t),
        &mut r,
    );
    assert_eq!(plan.lookahead.map(|l| l.team), Some(team('A')));
    assert_eq!(plan.early_exit, Some(6));
}

#[test]
fn no_duplicates_means_plain_pst() {
    let sl = SwapList::from_games(7, games("A B C D"));
    let plan = select_plan(&sl, 0.0, 0.0, &mut rng(5));
    assert_eq!(plan, LookaheadPlan::full(&sl));

    // On real schedules: whenever the plan is the plain chain, lpst equals partial_swap_teams.
    let mut r = rng(6);
    let mut seen = 0;
    for _ in 0..2000 {
        let s = random_drr(6, &mut r);
        let (ti, tj, round) = pst_args(&s, &mut r);
        let sl = simulate_pst(&s, ti, tj, round).unwrap();
        if !sl.lookahead_candidates().is_empty() || sl.early_exit_index().is_some() {
            continue;
        }
        seen += 1;
        let a = lpst(&s, ti, tj, round, 2.0, 3.0, &mut r).unwrap();
        let b = partial_swap_teams(&s, ti, tj, round, false, &mut r).unwrap();
        assert_eq!(a, b);
    }
    assert!(seen > 0);
}

#[test]
fn ten_team_swap_homes_and_rounds() {
    let (inst, s) = galaxy10_best();
    let (sol, cep, gem) = (0, 5, 3);
    let h = swap_homes(&s, sol, cep).unwrap();
    assert_eq!(h.game(sol, 0), (cep, Home));
    assert_eq!(h.game(sol, 3), (cep, Away));
    assert_eq!(h.game(cep, 0), (sol, Away));
    let changed: Vec<(usize, usize)> = (0..10)
        .flat_map(|t| (0..18).map(move |r| (t, r)))
        .filter(|&(t, r)| h.game(t, r) != s.game(t, r))
        .collect();
    assert_eq!(changed, [(sol, 0), (sol, 3), (cep, 0), (cep, 3)]);
    assert_eq!(swap_homes(&h, sol, cep).unwrap(), s);

    let w = swap_rounds(&s, 0, 1).unwrap();
    assert_eq!(w.game(sol, 0), (gem, Away));
    assert_eq!(w.game(sol, 1), (cep, Away));
    assert!(is_double_round_robin(&w));
    let _ = inst;
}

#[test]
fn swap_distance_matches_walk_oracle() {
    let mut r = rng(7);
    let d = toy4_matrix();
    let inst = Instance::new(d.clone(), None).unwrap();
    for _ in 0..200 {
        let s = random_drr(4, &mut r);
        let (a, b) = (r.gen_range(0..4), r.gen_range(0..4));
        if a == b {
            continue;
        }
        for out in [swap_teams(&s, a, b, false).unwrap(), swap_rounds(&s, 0, 5).unwrap()] {
            let oracle: i64 = (0..4).map(|t| walk_distance(&out, &d, t)).sum();
            assert_eq!(total_distance(&out, &inst), oracle);
        }
    }
}

#[test]
fn swap_teams_vn_is_violation_neutral() {
    let mut r = rng(8);
    for k in 0..1000 {
        let n = [4, 6, 8, 10][k % 4];
        let s = random_drr(n, &mut r);
        let (a, b) = distinct(&mut r, n);
        let out = swap_teams(&s, a, b, true).unwrap();
        assert_eq!(violations(&out).total, violations(&s).total);
        assert!(is_double_round_robin(&out));
    }
}

#[test]
fn move_argument_errors() {
    let s = random_drr(6, &mut rng(9));
    assert_eq!(swap_homes(&s, 2, 2), Err(MoveError::SameTeam(2)));
    assert_eq!(swap_rounds(&s, 3, 3), Err(MoveError::SameRound(3)));
    assert_eq!(swap_teams(&s, 1, 1, true), Err(MoveError::SameTeam(1)));
    assert_eq!(partial_swap_rounds(&s, 0, 4, 4), Err(MoveError::SameRound(4)));
    assert_eq!(swap_rounds(&s, 0, 10), Err(MoveError::RoundOutOfRange(10)));
    let r = s.meetings(0, 1).next().unwrap();
    assert_eq!(
        simulate_pst(&s, 0, 1, r),
        Err(MoveError::MutualGame { ti: 0, tj: 1, round: r })
    );
    assert!(matches!(
        partial_swap_teams(&s, 0, 1, r, true, &mut rng(0)),
        Err(MoveError::MutualGame { .. })
    ));
}

/// Fixed-point oracle: swap ti's two rounds, then keep swapping any team
/// whose pairing became inconsistent until nothing changes.
fn psr_fixed_point(s: &Schedule, ti: usize, rk: usize, rl: usize) -> Schedule {
    let n = s.n();
    let mut rows: Vec<Vec<(usize, Venue)>> = (0..n)
        .map(|t| (0..s.rounds()).map(|r| s.game(t, r)).collect())
        .collect();
    let mut swapped = vec![false; n];
    rows[ti].swap(rk, rl);
    swapped[ti] = true;
    loop {
        let mut changed = false;
        for t in 0..n {
            if swapped[t] {
                continue;
            }
            let broken = [rk, rl].iter().any(|&r| {
                let (o, v) = rows[t][r];
                rows[o][r] != (t, !v) || (0..n).any(|u| rows[u][r].0 == t && rows[t][r].0 != u)
            });
            if broken {
                rows[t].swap(rk, rl);
                swapped[t] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Schedule::from_rows(rows).expect("fixed point is consistent")
}

#[test]
fn partial_swap_rounds_matches_fixed_point_oracle() {
    let mut r = rng(10);
    for _ in 0..500 {
        let s = random_drr(6, &mut r);
        let ti = r.gen_range(0..6);
        let (rk, rl) = distinct(&mut r, 10);
        let out = partial_swap_rounds(&s, ti, rk, rl).unwrap();
        assert_eq!(out, psr_fixed_point(&s, ti, rk, rl));
        let closure = partial_swap_rounds_closure(&s, ti, rk, rl);
        if closure.len() == 6 {
            assert_eq!(out, swap_rounds(&s, rk, rl).unwrap());
        }
        if s.opponent(ti, rk) == s.opponent(ti, rl) {
            assert_eq!(closure.len(), 2);
        }
        for t in (0..6).filter(|t| !closure.contains(t)) {
            for round in 0..10 {
                assert_eq!(out.game(t, round), s.game(t, round));
            }
        }
    }
}

fn distinct<R: Rng>(r: &mut R, n: usize) -> (usize, usize) {
    let a = r.gen_range(0..n);
    let mut b = r.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn pst_args<R: Rng>(s: &Schedule, r: &mut R) -> (usize, usize, usize) {
    loop {
        let (ti, tj) = distinct(r, s.n());
        let round = r.gen_range(0..s.rounds());
        if s.opponent(ti, round) != tj {
            return (ti, tj, round);
        }
    }
}

#[test]
fn pst_starting_round_invariance() {
    let mut r = rng(11);
    for k in 0..1000 {
        let n = [4, 6, 8, 10][k % 4];
        let s = random_drr(n, &mut r);
        let (ti, tj, round) = pst_args(&s, &mut r);
        let base = partial_swap_teams_traced(&s, ti, tj, round, false, &mut r).unwrap();
        for other in base.swaps.rounds() {
            let alt = partial_swap_teams(&s, ti, tj, other, false, &mut r).unwrap();
            assert_eq!(alt, base.schedule, "start {other} vs {round}");
        }
    }
}

#[test]
fn early_exit_keeps_double_round_robin() {
    let mut r = rng(12);
    let mut exits = 0;
    for k in 0..10_000 {
        let n = [4, 6, 8, 10][k % 4];
        let s = random_drr(n, &mut r);
        let (ti, tj, round) = pst_args(&s, &mut r);
        let out = partial_swap_teams_traced(&s, ti, tj, round, true, &mut r).unwrap();
        exits += out.early_exit as usize;
        assert!(drr_oracle(&out.schedule));
    }
    assert!(exits > 100, "early exit too rare to be exercised: {exits}");
}

#[test]
fn lpst_exchange_count_matches_plan() {
    let mut r = rng(13);
    let mut with_gap = 0;
    for k in 0..4000 {
        let n = [4, 6, 8, 10][k % 4];
        let s = random_drr(n, &mut r);
        let (ti, tj, round) = pst_args(&s, &mut r);
        let penalties = PlanPenalties {
            look: r.gen_range(0.0..4.0),
            exit: r.gen_range(0.0..5.0),
        };
        let sl = simulate_pst(&s, ti, tj, round).unwrap();
        let out = lpst_traced(&s, ti, tj, round, penalties, &mut r).unwrap();
        assert_eq!(out.exchanges(), out.plan.predicted_swaps);
        assert_eq!(out.early_exit, out.plan.early_exit.is_some());
        if let (Some(g), None) = (out.plan.gap(), out.plan.early_exit) {
            assert_eq!(out.exchanges(), sl.len() - g);
            with_gap += 1;
        }
        assert_ne!(out.plan.lookahead.map(|l| l.team), Some(ti));
        assert!(drr_oracle(&out.schedule));
    }
    assert!(with_gap > 100);
}

#[test]
fn sample_move_respects_weights_and_preconditions() {
    let mut r = rng(14);
    let s4 = random_drr(4, &mut r);
    let w = ProposalWeights::default();
    for _ in 0..10_000 {
        let spec = sample_move(&s4, &w, &mut r);
        spec.check(&s4).unwrap();
        if let MoveSpec::Lpst { ti, tj, r: round } | MoveSpec::PartialSwapTeams { ti, tj, r: round } = spec {
            assert!(!s4.meetings(ti, tj).any(|m| m == round));
        }
    }
    let only = ProposalWeights::only(MoveKind::Lpst);
    for _ in 0..1000 {
        assert_eq!(sample_move(&s4, &only, &mut r).kind(), MoveKind::Lpst);
    }
    let s10 = random_drr(10, &mut r);
    let draws = 100_000;
    let hits = (0..draws)
        .filter(|_| sample_move(&s10, &w, &mut r).kind() == MoveKind::Lpst)
        .count();
    let f = hits as f64 / draws as f64;
    assert!((f - 0.66).abs() <= 0.02, "{f}");
}

#[test]
fn weights_validation() {
    assert!(ProposalWeights::new([0.1; 7]).is_err());
    assert!(ProposalWeights::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.0]).is_ok());
    assert!(ProposalWeights::new([1.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    let sum: f64 = ProposalWeights::default().as_array().iter().sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

fn apply_kind<R: Rng>(s: &Schedule, kind: MoveKind, r: &mut R) -> Schedule {
    let spec = sample_move(s, &ProposalWeights::only(kind), r);
    assert_eq!(spec.kind(), kind);
    spec.apply(s, PlanPenalties::default(), r).unwrap()
}

#[test]
fn involutions() {
    let mut r = rng(15);
    for k in 0..1000 {
        let n = [4, 6, 8, 10][k % 4];
        let s = random_drr(n, &mut r);
        let (a, b) = distinct(&mut r, n);
        let (x, y) = distinct(&mut r, s.rounds());
        assert_eq!(swap_homes(&swap_homes(&s, a, b).unwrap(), a, b).unwrap(), s);
        assert_eq!(swap_rounds(&swap_rounds(&s, x, y).unwrap(), x, y).unwrap(), s);
        assert_eq!(
            swap_teams(&swap_teams(&s, a, b, false).unwrap(), a, b, false).unwrap(),
            s
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_move_preserves_drr(seed in any::<u64>(), n_idx in 0usize..4, walk in 1usize..40) {
        let n = [4, 6, 8, 10][n_idx];
        let mut r = rng(seed);
        let mut s = random_drr(n, &mut r);
        for step in 0..walk {
            let kind = MoveKind::ALL[step % 7];
            let before = s.clone();
            let out = apply_kind(&s, kind, &mut r);
            prop_assert_eq!(&before, &s);
            prop_assert!(drr_oracle(&out), "{} broke the double round-robin", kind);
            s = out;
        }
    }
}
