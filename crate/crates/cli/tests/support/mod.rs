#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bench(name: &str, file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks").join(name).join(file)
}

pub fn pcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcp")).args(args).output().expect("run pcp")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("pcp exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Number of `frame` nodes in a proof value.
pub fn frame_count(v: &Value) -> usize {
    let mut n = 0;
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        if v["rule"] == "frame" {
            n += 1;
        }
        for key in ["inner", "left", "right"] {
            if let Some(child) = v.get(key) {
                stack.push(child);
            }
        }
    }
    n
}

/// Flips the polarity of the `k`-th frame map, in pre-order.
pub fn flip_frame(v: &mut Value, k: usize) {
    let mut seen = 0;
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        if v["rule"] == "frame" {
            if seen == k {
                let p = &mut v["map"]["polarity"];
                *p = Value::from(if *p == "+" { "-" } else { "+" });
                return;
            }
            seen += 1;
        }
        let Value::Object(obj) = v else { continue };
        let mut children: Vec<&mut Value> = obj
            .iter_mut()
            .filter(|(k, _)| matches!(k.as_str(), "inner" | "left" | "right"))
            .map(|(_, c)| c)
            .collect();
        // "right" sorts after "left"; push it first so "left" is visited first
        children.reverse();
        stack.extend(children);
    }
    panic!("proof has fewer than {} frames", k + 1);
}
