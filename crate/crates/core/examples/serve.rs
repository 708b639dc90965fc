//! Serves the demo catalog over HTTP until ctrl-c.
//!
//!     cargo run --example serve -- 127.0.0.1:7878 [ui-dir]
//!     curl 'http://127.0.0.1:7878/search?q=telescope&cluster=1&k=3'

mod support;

use std::sync::Arc;

#[tokio::main]
async fn main() -> lexis::Result<()> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:7878".into());
    let engine = tokio::task::spawn_blocking(|| support::demo_engine("serve")).await.expect("indexing panicked");
    if let Some(ui) = std::env::args().nth(2) {
        let mut config = (*engine.config()).clone();
        config.service.ui_dir = Some(ui.into());
        engine.set_config(config)?;
    }
    println!("try http://{addr}/search?q=telescope&cluster=1");
    lexis::service::serve(Arc::new(engine), &addr).await
}
