use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use chipfire_cli::cli::{Cli, Command, ServeArgs};
use chipfire_cli::commands::{self, Output, EXIT_MALFORMED};
use chipfire_cli::service::{router, ServiceConfig};
use clap::Parser;

fn read_input(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
    }
}

fn emit(out: Output) -> ExitCode {
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}

fn fail(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_MALFORMED as u8)
}

fn serve(args: ServeArgs) -> ExitCode {
    let config = ServiceConfig {
        max_sessions: args.max_sessions,
        static_dir: args.static_dir,
        ..Default::default()
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return fail(format!("cannot start runtime: {e}")),
    };
    let result = runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port)).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(&config)).await
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Solve(args) => match read_input(&args.instance) {
            Ok(text) => emit(commands::solve(&text, &args)),
            Err(e) => fail(e),
        },
        Command::Optimal(args) => match read_input(&args.instance) {
            Ok(text) => emit(commands::optimal(&text, &args)),
            Err(e) => fail(e),
        },
        Command::Gen(args) => match commands::gen(&args) {
            Ok(text) => match &args.out {
                Some(path) => match std::fs::write(path, text) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(format!("cannot write {}: {e}", path.display())),
                },
                None => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
            },
            Err(e) => fail(e),
        },
        Command::Serve(args) => serve(args),
    }
}
