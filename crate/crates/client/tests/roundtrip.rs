use cdgame_client::Client;
use cdgame_proto::{NewGame, ReductionRequest, Side, Variant};
use cdgame_server::{serve, ServerConfig};
use tokio::net::TcpListener;

async fn start() -> Client {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve(listener, ServerConfig::default(), std::future::pending()));
    Client::new(format!("http://{addr}/"))
}

#[tokio::test]
async fn plays_h3_as_staller_against_the_engine() {
    let client = start().await;
    let req = NewGame {
        gadget: Some("h".into()),
        param: Some(3),
        starter: Some(Side::Staller),
        engine: Some(Side::Dominator),
        ..Default::default()
    };
    let mut view = client.new_game(&req).await.unwrap();
    assert_eq!(view.to_move, Some(Side::Staller));
    let id = view.id.clone();
    while !view.over {
        let hint = client.hint(&id, None).await.unwrap();
        assert!(hint.exact);
        view = client.play(&id, &hint.vertex).await.unwrap();
    }
    // Both sides played optimally: the S-game value of H_3.
    assert_eq!(view.moves, 6);
    let fetched = client.game(&id).await.unwrap();
    assert_eq!(fetched.played, view.played);
}

#[tokio::test]
async fn errors_carry_the_api_body() {
    let client = start().await;
    let req = NewGame { gadget: Some("h".into()), param: Some(2), starter: Some(Side::Dominator), ..Default::default() };
    let view = client.new_game(&req).await.unwrap();
    client.play(&view.id, "u0").await.unwrap();
    let err = client.play(&view.id, "u3").await.unwrap_err();
    let body = err.api().unwrap();
    assert_eq!((body.error.as_str(), body.cause.as_deref()), ("illegal-move", Some("disconnected")));
    let missing = client.game("missing").await.unwrap_err();
    assert_eq!(missing.api().unwrap().error, "not-found");
}

#[tokio::test]
async fn reduction_then_graph_fetch() {
    let client = start().await;
    let red = client
        .reduction(&ReductionRequest { formula: "1 3\n2 3 5\n4 5".into(), variant: Variant::S, h_size: None })
        .await
        .unwrap();
    assert_eq!(red.vertices, 99);
    assert_eq!(client.graph(&red.graph_id).await.unwrap(), red.graph);
}
