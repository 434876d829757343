use std::f64::consts::PI;

use delayed_choice::bench::{format_angle, parse_angle, parse_bench, serialize, BenchCircuit, Source};
use delayed_choice::elements::Element;
use delayed_choice::measurement::{DetectorSpec, PolFilter};
use delayed_choice::state::Polarization;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    prop_oneof![
        -50.0f64..50.0,
        (-24i32..=24, 1u32..=24).prop_map(|(p, q)| p as f64 * PI / q as f64),
        Just(0.0),
    ]
}

fn element(modes: usize) -> impl Strategy<Value = Element> {
    let pair = (0..modes, 1..modes).prop_map(move |(i, k)| (i, (i + k) % modes));
    prop_oneof![
        pair.clone().prop_map(|(i, j)| Element::Bs(i, j)),
        pair.clone().prop_map(|(i, j)| Element::Pbs(i, j)),
        pair.prop_map(|(i, j)| Element::Qbs(i, j)),
        (0..modes, angle()).prop_map(|(i, a)| Element::Phase(i, a)),
        (0..modes, -360.0f64..360.0).prop_map(|(i, d)| Element::Hwp(i, d)),
    ]
}

fn circuit() -> impl Strategy<Value = BenchCircuit> {
    (2usize..=6).prop_flat_map(|modes| {
        let pol = prop_oneof![Just(PolFilter::H), Just(PolFilter::V), Just(PolFilter::Any)];
        (
            angle(),
            0..modes,
            prop::collection::vec(element(modes), 0..12),
            prop::collection::vec((0..modes, pol), 0..5),
            prop_oneof![Just(None), Just(Some(Polarization::H)), Just(Some(Polarization::V))],
        )
            .prop_map(move |(alpha, mode, elements, dets, postselect)| BenchCircuit {
                modes,
                source: Source { alpha, mode },
                elements,
                detectors: dets
                    .into_iter()
                    .enumerate()
                    .map(|(k, (m, p))| DetectorSpec::new(format!("D{k}"), m, p))
                    .collect(),
                postselect,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(c in circuit()) {
        let text = serialize(&c);
        prop_assert_eq!(parse_bench(&text).unwrap(), c.clone());
        // CRLF input parses to the same circuit.
        prop_assert_eq!(parse_bench(&text.replace('\n', "\r\n")).unwrap(), c);
    }

    #[test]
    fn corrupted_keyword_is_reported_on_its_line(c in circuit(), pick in any::<prop::sample::Index>()) {
        let text = serialize(&c);
        let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
        let k = pick.index(lines.len());
        let rest = lines[k].split_once(' ').map_or(String::new(), |(_, r)| format!(" {r}"));
        lines[k] = format!("frobnicate{rest}");
        let err = parse_bench(&lines.join("\n")).unwrap_err();
        prop_assert_eq!(err.line, k + 1);
    }

    #[test]
    fn corrupted_number_is_reported_on_its_line(c in circuit(), pick in any::<prop::sample::Index>()) {
        let text = serialize(&c);
        let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
        // every line except `postselect` carries a number in its last token
        let numeric: Vec<usize> = (0..lines.len()).filter(|&k| !lines[k].starts_with("postselect")).collect();
        let k = numeric[pick.index(numeric.len())];
        if lines[k].starts_with("detect ") {
            lines[k] = lines[k].replace(" mode=", " mode=1.5x");
        } else {
            lines[k].push('q');
        }
        let err = parse_bench(&lines.join("\n")).unwrap_err();
        prop_assert_eq!(err.line, k + 1);
    }

    #[test]
    fn angles_round_trip_bit_exactly(x in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
        let back = parse_angle(&format_angle(x)).unwrap();
        prop_assert!(back == x || (back == 0.0 && x == 0.0));
    }
}

#[test]
fn comments_and_blank_lines_shift_line_numbers() {
    let text = "# header\n\nmodes 2\nsource alpha=pi/4 mode=0\n  # indented comment\nbs 0 7\n";
    let err = parse_bench(text).unwrap_err();
    assert_eq!(err.line, 6);
}

#[test]
fn empty_element_list_serializes_compactly() {
    let c = BenchCircuit::new(2, Source { alpha: PI / 4.0, mode: 1 }).detector("D", 1, PolFilter::Any);
    assert_eq!(serialize(&c), "modes 2\nsource alpha=pi/4 mode=1\ndetect D mode=1 pol=any\n");
}
