use std::sync::Arc;

use cdgame_core::corpus::corpus;
use cdgame_core::gadgets::build_hn;
use cdgame_core::poscnf::{poscnf_winner, PosCnfPlayer};
use cdgame_core::reduction::{build_gf, build_gf_prime, Reduction};
use cdgame_core::solver::{game_value, Budget};
use cdgame_core::strategies::{
    verify_lower, verify_upper, DominatorReduction, Fast, SGameDominator, SGameStaller, Slow, SolverStrategy,
    StallerReduction, Strategy,
};
use cdgame_core::{Formula, GameState, Player};

const BUDGET: u64 = 20_000_000;

#[test]
fn fast_holds_hn_to_n_moves() {
    for n in 2..=8 {
        let g = Arc::new(build_hn(n).unwrap());
        let r = verify_upper(&g, &Fast::new(), Player::Dominator, Player::Dominator, n, Budget::unlimited()).unwrap();
        assert!(r.exact && r.holds());
        assert_eq!(r.worst_length, n);
    }
}

#[test]
fn slow_stretches_hn_to_2n_moves() {
    for n in 2..=6 {
        let g = Arc::new(build_hn(n).unwrap());
        let r = verify_lower(&g, &Slow::new(), Player::Staller, Player::Staller, 2 * n, Budget::unlimited()).unwrap();
        assert!(r.exact && r.holds());
        assert_eq!(r.worst_length, 2 * n);
    }
}

#[test]
fn solver_strategy_realizes_the_game_value_on_both_sides() {
    for g in corpus(21, 80, 7) {
        let g = Arc::new(g);
        for starter in [Player::Dominator, Player::Staller] {
            let value = game_value(&g, starter, Budget::unlimited()).unwrap().value;
            let up = verify_upper(&g, &SolverStrategy::default(), Player::Dominator, starter, value, Budget::unlimited())
                .unwrap();
            let low =
                verify_lower(&g, &SolverStrategy::default(), Player::Staller, starter, value, Budget::unlimited()).unwrap();
            assert_eq!((up.worst_length, low.worst_length), (value, value), "{}", g.to_text());
        }
    }
}

/// Runs the strategy for whichever player wins the formula game against
/// every opposing line, at that player's target.
fn check_reduction(text: &str, s_game: bool) {
    let f: Formula = text.parse().unwrap();
    let red: Reduction = if s_game { build_gf_prime(&f, None) } else { build_gf(&f, None) }.unwrap();
    let starter = if s_game { Player::Staller } else { Player::Dominator };
    let t = red.targets();
    let budget = Budget::nodes(BUDGET);
    let r = if poscnf_winner(&f).unwrap().winner == PosCnfPlayer::Player1 {
        let s: Box<dyn Strategy> =
            if s_game { Box::new(SGameDominator::new(&red).unwrap()) } else { Box::new(DominatorReduction::new(&red).unwrap()) };
        verify_upper(&red.graph, s.as_ref(), Player::Dominator, starter, t.p1_bound, budget).unwrap()
    } else {
        let s: Box<dyn Strategy> =
            if s_game { Box::new(SGameStaller::new(&red).unwrap()) } else { Box::new(StallerReduction::new(&red).unwrap()) };
        verify_lower(&red.graph, s.as_ref(), Player::Staller, starter, t.p2_bound, budget).unwrap()
    };
    assert!(r.holds(), "{text:?} s_game={s_game}: {r:?}");
}

#[test]
fn reduction_strategies_meet_their_targets_on_small_formulas() {
    for text in ["1", "1 2", "1\n2"] {
        check_reduction(text, false);
        check_reduction(text, true);
    }
}

#[test]
fn dominator_reduction_follows_the_spine_then_opens_on_a_variable() {
    let f: Formula = "1".parse().unwrap();
    let red = build_gf(&f, None).unwrap();
    let mut dom = DominatorReduction::new(&red).unwrap();
    let mut s = GameState::new(red.graph.clone(), Player::Dominator).unwrap();
    let h = &red.layout.h;
    while !s.played_set().contains(h.u[0]) {
        let v = if s.to_move() == Player::Dominator { dom.next_move(&s).unwrap() } else { s.legal_moves().first().unwrap() };
        s.apply_move(v).unwrap();
    }
    assert_eq!(s.move_count(), 2 * f.n() + 8);
    assert_eq!(s.played()[0], h.u[h.n]);
    assert_eq!(red.graph.label(dom.next_move(&s).unwrap()), "B1:a");
    assert!(dom.context().imagined_assignment.is_true(1));
}

#[test]
fn sgame_staller_plays_13_moves_on_h6_ending_with_u7() {
    let f: Formula = "1\n2".parse().unwrap();
    let red = build_gf_prime(&f, None).unwrap();
    let mut staller = SGameStaller::new(&red).unwrap();
    let mut s = GameState::new(red.graph.clone(), Player::Staller).unwrap();
    // Dominator walks the spine upwards towards u_7.
    let h = &red.layout.h;
    while !s.played_set().contains(h.u[7]) {
        let v = if s.to_move() == Player::Staller {
            staller.next_move(&s).unwrap()
        } else {
            (1..=7).map(|i| h.u[i]).find(|&v| s.is_legal(v)).unwrap_or_else(|| s.legal_moves().first().unwrap())
        };
        s.apply_move(v).unwrap();
    }
    assert_eq!(red.graph.label(s.played()[0]), "H:u0");
    assert_eq!(s.move_count(), 13);
    assert_eq!(s.mover_at(12), Player::Staller);
}

#[test]
fn reduction_strategies_refuse_the_wrong_variant() {
    let f: Formula = "1".parse().unwrap();
    let d = build_gf(&f, None).unwrap();
    let s = build_gf_prime(&f, None).unwrap();
    assert!(SGameDominator::new(&d).is_err());
    assert!(DominatorReduction::new(&s).is_err());
    assert!(StallerReduction::new(&s).is_err());
    assert!(SGameStaller::new(&d).is_err());
}
