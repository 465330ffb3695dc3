use std::sync::Arc;

use cdgame_core::corpus::corpus;
use cdgame_core::{GameState, Player};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_plays_on_corpus_graphs(seed in 0u64..10_000, picks in prop::collection::vec(any::<prop::sample::Index>(), 16)) {
        let g = Arc::new(corpus(seed, 1, 12).pop().unwrap());
        let starter = if seed % 2 == 0 { Player::Dominator } else { Player::Staller };
        let mut s = GameState::new(g.clone(), starter).unwrap();
        let mut previous = s.dominated().clone();
        let mut turn = 0;
        while !s.is_over() {
            let moves = s.legal_moves().to_vec();
            prop_assert!(!moves.is_empty());
            let v = *picks[turn % picks.len()].get(&moves);
            prop_assert_eq!(s.to_move(), if turn % 2 == 0 { starter } else { starter.other() });
            s.apply_move(v).unwrap();
            prop_assert!(previous.is_subset(s.dominated()) && previous != *s.dominated());
            previous = s.dominated().clone();
            turn += 1;
        }
        prop_assert!(s.legal_moves().is_empty());
        prop_assert_eq!(s.dominated().len(), g.n());
        prop_assert!(s.move_count() <= g.n());
        prop_assert!(s.check_invariants().is_ok());
        let replayed = GameState::replay(g.clone(), starter, &s.played_labels()).unwrap();
        prop_assert_eq!(replayed.played(), s.played());
    }
}
