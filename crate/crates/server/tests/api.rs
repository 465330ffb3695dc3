use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use cdgame_server::{router, AppState, ServerConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::new(ServerConfig::default()))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req.body(body.map(|b| Body::from(b.to_string())).unwrap_or_default()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let ct = resp.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(ct.as_deref(), Some("application/json"), "{uri}: {}", String::from_utf8_lossy(&bytes));
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, Some(&body.to_string())).await
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None).await
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn schema_example_game_on_h3() {
    let app = app();
    let (status, game) = post(&app, "/api/game", json!({"gadget":"h","param":3,"starter":"d","engine":"staller"})).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(game["toMove"], "dominator");
    assert_eq!(strings(&game["legal"]).len(), 9);
    let id = game["id"].as_str().unwrap().to_string();

    let (status, after) = post(&app, &format!("/api/game/{id}/move"), json!({"vertex":"u3"})).await;
    assert_eq!(status, StatusCode::OK);
    // The engine answers at once, so Dominator is to move again.
    assert_eq!(strings(&after["engineMoves"]).len(), 1);
    assert_eq!(after["moves"], 2);
    assert_eq!(after["toMove"], "dominator");

    let (status, hint) = get(&app, &format!("/api/game/{id}/hint")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["exact"], true);
    assert!(strings(&after["legal"]).contains(&hint["move"].as_str().unwrap().to_string()));
    assert!(hint["value"].as_u64().unwrap() >= 3);

    let (_, again) = get(&app, &format!("/api/game/{id}")).await;
    assert_eq!(again["played"], after["played"]);
    assert_eq!(again["engineMoves"], json!([]));
}

#[tokio::test]
async fn engine_opens_when_it_starts() {
    let app = app();
    let (status, game) = post(&app, "/api/game", json!({"gadget":"a","starter":"dominator","engine":"d"})).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(strings(&game["engineMoves"]).len(), 1);
    assert_eq!(game["toMove"], "staller");
}

#[tokio::test]
async fn illegal_moves_report_the_violated_condition() {
    let app = app();
    let (_, game) = post(&app, "/api/game", json!({"gadget":"h","param":3,"starter":"d"})).await;
    let id = game["id"].as_str().unwrap();
    let uri = format!("/api/game/{id}/move");
    assert_eq!(post(&app, &uri, json!({"vertex":"u0"})).await.0, StatusCode::OK);
    // u_3 is not adjacent to u_0.
    let (status, err) = post(&app, &uri, json!({"vertex":"u3"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err, json!({"error":"illegal-move","cause":"disconnected"}));

    let (_, game) = post(&app, "/api/game", json!({"gadget":"h","param":2,"starter":"d"})).await;
    let id = game["id"].as_str().unwrap();
    let uri = format!("/api/game/{id}/move");
    assert_eq!(post(&app, &uri, json!({"vertex":"u1"})).await.0, StatusCode::OK);
    // N[u_0] = {u_0, u_1} is already dominated by u_1.
    let (status, err) = post(&app, &uri, json!({"vertex":"u0"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err, json!({"error":"illegal-move","cause":"no-new-domination"}));
    let (_, view) = get(&app, &format!("/api/game/{id}")).await;
    assert_eq!(view["moves"], 1);
}

#[tokio::test]
async fn bad_requests_are_rejected_with_json() {
    let app = app();
    let (status, err) = post(&app, "/api/game", json!({"gadget":"h","param":3,"starter":"d","color":"red"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"], "bad-request");
    assert_eq!(call(&app, Method::POST, "/api/game", Some("{not json")).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(&app, "/api/game", json!({"gadget":"q","starter":"d"})).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(&app, "/api/game", json!({"starter":"d"})).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(&app, "/api/game", json!({"gadget":"h","param":3})).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(
        post(&app, "/api/game", json!({"gadget":"b","formula":"1","starter":"d"})).await.0,
        StatusCode::BAD_REQUEST
    );
    let disconnected = json!({"graph":{"labels":["a","b"],"edges":[]},"starter":"d"});
    assert_eq!(post(&app, "/api/game", disconnected).await.0, StatusCode::BAD_REQUEST);

    let (_, game) = post(&app, "/api/game", json!({"gadget":"b","starter":"s"})).await;
    let id = game["id"].as_str().unwrap();
    assert_eq!(post(&app, &format!("/api/game/{id}/move"), json!({"vertex":"a","x":1})).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, &format!("/api/game/{id}/hint?depth=3")).await.0, StatusCode::BAD_REQUEST);
    let (status, err) = post(&app, &format!("/api/game/{id}/move"), json!({"vertex":"zz"})).await;
    assert_eq!((status, err["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("unknown-vertex")));
}

#[tokio::test]
async fn unknown_ids_and_routes_are_404() {
    let app = app();
    assert_eq!(get(&app, "/api/game/nope").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/game/nope/hint").await.0, StatusCode::NOT_FOUND);
    assert_eq!(post(&app, "/api/game/nope/move", json!({"vertex":"a"})).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/graph/nope").await.0, StatusCode::NOT_FOUND);
    let (status, err) = get(&app, "/api/elsewhere").await;
    assert_eq!((status, err["error"].as_str()), (StatusCode::NOT_FOUND, Some("not-found")));
}

#[tokio::test]
async fn finished_games_refuse_moves_and_hints() {
    let app = app();
    let graph = json!({"graph":{"labels":["a","b"],"edges":[["a","b"]]},"starter":"d"});
    let (_, game) = post(&app, "/api/game", graph).await;
    let id = game["id"].as_str().unwrap();
    let (_, done) = post(&app, &format!("/api/game/{id}/move"), json!({"vertex":"a"})).await;
    assert_eq!(done["over"], true);
    assert_eq!(done["toMove"], Value::Null);
    assert_eq!(done["legal"], json!([]));
    assert_eq!(get(&app, &format!("/api/game/{id}/hint")).await.0, StatusCode::CONFLICT);
    assert_eq!(post(&app, &format!("/api/game/{id}/move"), json!({"vertex":"b"})).await.0, StatusCode::CONFLICT);
}

#[tokio::test]
async fn reduction_graphs_are_registered_for_play() {
    let app = app();
    let (status, red) = post(&app, "/api/reduction", json!({"formula":"1 3\n2 3 5\n4 5"})).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(red["vertices"], 120);
    assert_eq!(red["variant"], "d");
    assert_eq!(strings(&red["graph"]["labels"]).len(), 120);
    let graph_id = red["graphId"].as_str().unwrap();

    let (status, g) = get(&app, &format!("/api/graph/{graph_id}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(g, red["graph"]);

    let (_, s) = post(&app, "/api/reduction", json!({"formula":"1 3 / 2 3 5 / 4 5","variant":"s"})).await;
    assert_eq!(s["vertices"], 99);
    assert_eq!(s["targets"]["gammaCExpected"], Value::Null);

    let (status, game) = post(&app, "/api/game", json!({"graphId": graph_id, "starter":"d"})).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(game["graphId"], graph_id);
    assert_eq!(post(&app, "/api/reduction", json!({"formula":"1 0"})).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn engine_falls_back_to_the_scripted_strategy_on_large_reductions() {
    let app = app();
    // A 1-node budget cannot solve G_F, so the engine plays the reduction strategy,
    // which opens at the top of the H spine.
    let (_, game) = post(
        &app,
        "/api/game",
        json!({"formula":"1","starter":"d","engine":"dominator","engineNodes":1}),
    )
    .await;
    assert_eq!(strings(&game["engineMoves"]), vec!["H:u9".to_string()]);
    let id = game["id"].as_str().unwrap().to_string();
    // Play the game out with Staller taking the first legal vertex each time.
    let mut view = game;
    while view["over"] == false {
        let v = strings(&view["legal"])[0].clone();
        let (status, next) = post(&app, &format!("/api/game/{id}/move"), json!({"vertex": v})).await;
        assert_eq!(status, StatusCode::OK);
        view = next;
    }
    assert!(view["moves"].as_u64().unwrap() <= 18);
}

#[tokio::test]
async fn sessions_are_independent_under_concurrency() {
    let app = app();
    let mut ids = Vec::new();
    for _ in 0..8 {
        let (_, g) = post(&app, "/api/game", json!({"gadget":"h","param":4,"starter":"s"})).await;
        ids.push(g["id"].as_str().unwrap().to_string());
    }
    let tasks: Vec<_> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let (app, id) = (app.clone(), id.clone());
            tokio::spawn(async move {
                let first = if i % 2 == 0 { "u0" } else { "u4" };
                let (s, v) = post(&app, &format!("/api/game/{id}/move"), json!({"vertex": first})).await;
                assert_eq!(s, StatusCode::OK);
                let (_, h) = get(&app, &format!("/api/game/{id}/hint")).await;
                (v, h)
            })
        })
        .collect();
    for (i, t) in tasks.into_iter().enumerate() {
        let (view, hint) = t.await.unwrap();
        assert_eq!(strings(&view["played"]), vec![if i % 2 == 0 { "u0" } else { "u4" }.to_string()]);
        assert_eq!(view["moves"], 1);
        assert_eq!(hint["exact"], true);
    }
}
