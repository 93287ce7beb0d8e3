use divides::moves::{apply_move, enumerate_moves};
use divides::{validate, DivideWord, Event};
use proptest::prelude::*;

/// Event lists that stay within four strands, starting from one.
fn words() -> impl Strategy<Value = DivideWord> {
    prop::collection::vec((0u8..3, 1u32..4), 0..8).prop_map(|raw| {
        let mut c = 1u32;
        let mut events = Vec::new();
        for (kind, pos) in raw {
            let e = match kind {
                0 if c + 2 <= 4 => Event::Birth(pos.min(c + 1)),
                1 if c >= 2 => Event::Death(pos.min(c - 1)),
                _ if c >= 2 => Event::Cross(pos.min(c - 1)),
                _ => continue,
            };
            c = match e {
                Event::Birth(_) => c + 2,
                Event::Death(_) => c - 2,
                Event::Cross(_) => c,
            };
            events.push(e);
        }
        DivideWord::new("p", 1, events).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn div1_round_trip(w in words()) {
        prop_assert_eq!(divides::parse_divide(&w.to_div1()).unwrap(), w.clone());
        prop_assert_eq!(DivideWord::from_compact("p", &w.compact()).unwrap(), w);
    }

    #[test]
    fn moves_undo(w in words()) {
        let Ok(d) = validate(&w) else { return Ok(()) };
        for m in enumerate_moves(&d) {
            let after = apply_move(&d, &m).unwrap();
            prop_assert_eq!(after.delta as i64 - d.delta as i64, m.delta_change());
            let back = apply_move(&after, &m.inverse()).unwrap();
            prop_assert_eq!(&back.word.events, &d.word.events);
        }
    }
}
