//! Adapter for models hosted in an external process, speaking a
//! line-oriented text protocol over stdin/stdout.
//!
//! Handshake: on launch the adapter sends `ARITY m\n` and expects `OK\n`.
//! Each evaluation sends one request line with the point's coordinates as
//! space-separated shortest round-trip decimals and reads one decimal reply
//! line. Requests are strictly serial: one in flight at a time.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::time::Duration;

use crate::domain::OutputModel;
use crate::error::{Error, Result};

pub const DEFAULT_CALL_TIMEOUT: Duration = Duration::from_secs(10);

pub struct ExternalModel {
    inner: Mutex<Inner>,
    arity: usize,
    timeout: Duration,
    command: Vec<String>,
}

struct Inner {
    child: Child,
    stdin: ChildStdin,
    replies: Receiver<std::io::Result<String>>,
}

impl ExternalModel {
    /// Launches `argv` and performs the `ARITY`/`OK` handshake.
    pub fn spawn(argv: &[String], arity: usize, timeout: Duration) -> Result<Self> {
        let (program, args) = argv
            .split_first()
            .ok_or_else(|| Error::Validation("external model command is empty".into()))?;
        if arity == 0 {
            return Err(Error::Validation(
                "external model arity must be positive".into(),
            ));
        }
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::ProcessDied(format!("failed to launch `{program}`: {e}")))?;
        let stdin = child.stdin.take().expect("stdin was piped");
        let stdout = child.stdout.take().expect("stdout was piped");

        // A reader thread turns blocking line reads into a channel we can
        // wait on with a timeout.
        let (tx, rx) = std::sync::mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                let failed = line.is_err();
                if tx.send(line).is_err() || failed {
                    break;
                }
            }
        });

        let mut model = ExternalModel {
            inner: Mutex::new(Inner {
                child,
                stdin,
                replies: rx,
            }),
            arity,
            timeout,
            command: argv.to_vec(),
        };
        model.handshake()?;
        Ok(model)
    }

    fn handshake(&mut self) -> Result<()> {
        let inner = self.inner.get_mut().expect("lock poisoned");
        write_line(inner, &format!("ARITY {}", self.arity))?;
        let reply = read_line(inner, self.timeout)?;
        if reply.trim() != "OK" {
            return Err(Error::Protocol(format!(
                "handshake expected OK, got `{}`",
                reply.trim()
            )));
        }
        Ok(())
    }

    pub fn command(&self) -> &[String] {
        &self.command
    }
}

fn write_line(inner: &mut Inner, line: &str) -> Result<()> {
    let payload = format!("{line}\n");
    inner
        .stdin
        .write_all(payload.as_bytes())
        .and_then(|_| inner.stdin.flush())
        .map_err(|e| Error::ProcessDied(format!("write to model failed: {e}")))
}

fn read_line(inner: &mut Inner, timeout: Duration) -> Result<String> {
    match inner.replies.recv_timeout(timeout) {
        Ok(Ok(line)) => Ok(line),
        Ok(Err(e)) => Err(Error::ProcessDied(format!("read from model failed: {e}"))),
        Err(RecvTimeoutError::Timeout) => Err(Error::Timeout(timeout)),
        Err(RecvTimeoutError::Disconnected) => {
            Err(Error::ProcessDied("model closed its output stream".into()))
        }
    }
}

impl OutputModel for ExternalModel {
    fn arity(&self) -> usize {
        self.arity
    }

    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        self.check_arity(point)?;
        let mut request = String::new();
        for (i, v) in point.iter().enumerate() {
            if i > 0 {
                request.push(' ');
            }
            write!(request, "{v}").expect("write to string");
        }
        let mut inner = self.inner.lock().expect("lock poisoned");
        write_line(&mut inner, &request)?;
        let reply = read_line(&mut inner, self.timeout)?;
        reply
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Protocol(format!("non-numeric reply `{}`", reply.trim())))
    }

    fn concurrent_safe(&self) -> bool {
        false
    }
}

impl Drop for ExternalModel {
    fn drop(&mut self) {
        if let Ok(inner) = self.inner.get_mut() {
            let _ = inner.child.kill();
            let _ = inner.child.wait();
        }
    }
}
