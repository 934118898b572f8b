use std::time::Duration;

use cornerbase::agents::{AgentSpec, PolicyKind, RewardScheme};
use cornerbase::harness::{BatchDir, BatchSpec, Plan, StageSpec};
use cornerbase::net::TdParams;
use cornerbase::wire::{CreateSession, Pending, PitRequest, PlanRef, RunRequest};
use cornerbase::{BoardConfig, Move, Player, Square};
use cornerbase_client::{Client, ClientError};
use cornerbase_service::{spawn_local, ServeConfig};

fn spec(id: &str, stages: Vec<StageSpec>) -> BatchSpec {
    BatchSpec {
        id: id.into(),
        board: BoardConfig::new(6, 1, 3).unwrap(),
        scheme: RewardScheme::R3,
        params: TdParams::default(),
        stages,
        seed_networks: None,
        rng_seed: 1,
        max_plies: 300,
    }
}

async fn local(out: &std::path::Path) -> Client {
    let addr = spawn_local(ServeConfig { out: out.to_path_buf(), ..ServeConfig::default() }).await.unwrap();
    Client::new(format!("http://{addr}/"))
}

#[tokio::test]
async fn run_then_pit_through_the_client() {
    let dir = tempfile::tempdir().unwrap();
    let client = local(dir.path()).await;
    client.health().await.unwrap();
    let plan = Plan { batches: vec![spec("c", vec![StageSpec::cc(5)])] };
    let reply = client.run(&RunRequest { plan, out: dir.path().join("o"), seed: Some(4) }).await.unwrap();
    assert!(reply.error.is_none());
    assert_eq!(reply.batches[0].rows.len(), 1);

    let b = BatchDir::new(&dir.path().join("o"), "c");
    let pit = PitRequest {
        white: b.latest_snapshot(Player::White),
        black: b.latest_snapshot(Player::Black),
        games: 6,
        frozen: false,
        seed: 2,
        label: "W - B".into(),
        scheme: RewardScheme::R3,
    };
    let report = client.pit(&pit).await.unwrap();
    assert_eq!(report.games, 6);
    assert!(report.is_consistent());
}

#[tokio::test]
async fn sessions_and_errors_through_the_client() {
    let dir = tempfile::tempdir().unwrap();
    let client = local(dir.path()).await;
    let plan = Plan { batches: vec![spec("h", vec![StageSpec::hc(1, AgentSpec::human(Some(PolicyKind::P1)))])] };
    let id = client.create_session(&CreateSession { plan: PlanRef::Inline(plan), seed: None }).await.unwrap();
    let mut state = client.state(&id).await.unwrap();
    while state.pending != Pending::WaitingHuman {
        tokio::time::sleep(Duration::from_millis(5)).await;
        state = client.state(&id).await.unwrap();
    }
    let err = client.play(&id, Move::ExitBase { dst: Square::new(4, 4) }).await.unwrap_err();
    match &err {
        ClientError::Api { status, body } => assert_eq!((*status, body.exit_code), (422, None)),
        other => panic!("{other}"),
    }
    let reply = client.play(&id, state.legal[0]).await.unwrap();
    assert!(reply.engine_move.is_some());
    assert_eq!(reply.state.ply, 2);
    assert!(client.stats(&id).await.unwrap().is_empty());

    let missing = client.state("nope").await.unwrap_err();
    assert!(matches!(missing, ClientError::Api { status: 404, .. }));
    let down = Client::new("http://127.0.0.1:9").health().await.unwrap_err();
    assert_eq!(down.exit_code(), 4);
}
