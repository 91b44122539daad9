use std::io::Write;

use proptest::prelude::*;
use uuid::Uuid;

use regret_elicit::engine::{Probe, Progress};
use regret_elicit::{SubjectSpec, SyntheticSubject, WeightingSpec};
use regret_survey::events::{read_events, Event, SessionConfig, SubjectKind};
use regret_survey::session::NextProblem;
use regret_survey::store::load_log;
use regret_survey::Session;

#[derive(Debug, Clone, PartialEq)]
struct Snapshot {
    next: Option<Probe>,
    outstanding: Option<Probe>,
    progress: Progress,
    complete: bool,
}

fn snapshot(s: &Session) -> Snapshot {
    Snapshot {
        next: s.engine().current_probe(),
        outstanding: s.outstanding(),
        progress: s.progress(),
        complete: s.is_complete(),
    }
}

/// A full live session, with the state after every event.
fn live_session(spec: SubjectSpec, practice: bool) -> (Vec<Event>, Vec<Snapshot>) {
    let mut subject = SyntheticSubject::new(spec).unwrap();
    let config = SessionConfig {
        session_id: Uuid::from_u64_pair(spec.seed, 1),
        money_scale: 250.0,
        seed: spec.seed,
        practice,
        subject: SubjectKind::Synthetic { spec },
    };
    let (mut session, created) = Session::create(config).unwrap();
    let mut events = vec![created];
    let mut snapshots = vec![snapshot(&session)];
    let mut push = |session: &Session, new: Vec<Event>, events: &mut Vec<Event>| {
        for e in new {
            events.push(e);
            snapshots.push(snapshot(session));
        }
    };
    loop {
        let (next, new) = session.present().unwrap();
        push(&session, new, &mut events);
        let NextProblem::Problem(probe) = next else {
            break;
        };
        let (_, new) = session
            .submit(subject.respond(&probe.problem).unwrap())
            .unwrap();
        push(&session, new, &mut events);
    }
    (events, snapshots)
}

fn subject() -> impl Strategy<Value = SubjectSpec> {
    (
        any::<u64>(),
        prop::sample::select(vec![0.0, 0.05, 0.1, 0.3]),
        0.5..1.2f64,
    )
        .prop_map(|(seed, noise, g)| SubjectSpec {
            w_true: WeightingSpec::tversky_kahneman(g).unwrap(),
            noise_sigma: noise,
            ..SubjectSpec::identity(seed)
        })
}

fn write_log(dir: &std::path::Path, events: &[Event]) -> std::path::PathBuf {
    let path = dir.join("session.jsonl");
    let mut file = std::fs::File::create(&path).unwrap();
    for e in events {
        writeln!(file, "{}", serde_json::to_string(e).unwrap()).unwrap();
    }
    path
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(1000) })]

    /// Replaying any prefix of the log rebuilds the live state at that point.
    #[test]
    fn replay_matches_live_state_at_any_truncation(
        spec in subject(), practice in any::<bool>(), cut in 0.0..1.0f64,
    ) {
        let (events, snapshots) = live_session(spec, practice);
        let keep = 1 + (cut * (events.len() - 1) as f64) as usize;
        let dir = tempfile::tempdir().unwrap();
        let path = write_log(dir.path(), &events[..keep]);
        let parsed = read_events(&path, false).unwrap();
        prop_assert_eq!(&parsed[..], &events[..keep]);
        let (replayed, repair) = Session::replay(&parsed).unwrap();
        prop_assert_eq!(snapshot(&replayed), snapshots[keep - 1].clone());
        if keep == events.len() {
            prop_assert!(repair.is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    /// A write torn at any byte loses at most the torn event.
    #[test]
    fn torn_tail_is_dropped_and_repaired(seed in any::<u64>(), cut in 0.0..1.0f64) {
        let (events, snapshots) = live_session(SubjectSpec::identity(seed), false);
        let dir = tempfile::tempdir().unwrap();
        let path = write_log(dir.path(), &events);
        let bytes = std::fs::read(&path).unwrap();
        let cut_at = 1 + (cut * (bytes.len() - 1) as f64) as usize;
        std::fs::write(&path, &bytes[..cut_at]).unwrap();
        let complete_lines = bytes[..cut_at].iter().filter(|&&b| b == b'\n').count();
        prop_assume!(complete_lines >= 1);

        let session = load_log(&path).unwrap();
        // a fragment that is a whole event short of its newline still counts
        let tail_start = bytes[..cut_at].iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let fragment = &bytes[tail_start..cut_at];
        let kept = complete_lines + usize::from(serde_json::from_slice::<Event>(fragment).is_ok());
        prop_assert_eq!(snapshot(&session), snapshots[kept - 1].clone());
        // the repaired file replays again and ends on a line boundary
        let text = std::fs::read_to_string(&path).unwrap();
        prop_assert!(text.ends_with('\n'));
        let again = load_log(&path).unwrap();
        prop_assert_eq!(snapshot(&again), snapshot(&session));
    }
}

#[test]
fn finished_log_missing_results_is_completed_on_load() {
    let (events, _) = live_session(SubjectSpec::identity(5), false);
    let dir = tempfile::tempdir().unwrap();
    // drop model-fitted and metrics-computed as if the process died
    let path = write_log(dir.path(), &events[..events.len() - 2]);
    let session = load_log(&path).unwrap();
    assert!(session.report().is_ok());
    let restored = read_events(&path, false).unwrap();
    assert_eq!(restored.len(), events.len());
    assert_eq!(
        restored[restored.len() - 2].body.type_name(),
        "model-fitted"
    );
    assert_eq!(
        restored[restored.len() - 1].body,
        events[events.len() - 1].body
    );
}

#[test]
fn tampered_logs_are_rejected() {
    let (events, _) = live_session(SubjectSpec::identity(5), false);
    let mut swapped = events.clone();
    swapped.swap(1, 2);
    assert!(Session::replay(&swapped).is_err());
    assert!(Session::replay(&events[1..]).is_err());
    assert!(Session::replay(&[]).is_err());
    let mut doubled = events[..2].to_vec();
    doubled.push(events[1].clone());
    assert!(Session::replay(&doubled).is_err());
}
