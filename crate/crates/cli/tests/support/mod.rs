#![allow(dead_code)]

use std::process::{Command, Output};

pub fn kleinfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinfold")).args(args).output().expect("binary runs")
}

pub struct Obj {
    pub positions: Vec<[f64; 3]>,
    pub texcoords: Vec<[f64; 2]>,
    pub faces: Vec<[(usize, usize); 3]>,
}

pub fn parse_obj(text: &str) -> Obj {
    let mut obj = Obj { positions: Vec::new(), texcoords: Vec::new(), faces: Vec::new() };
    for line in text.lines() {
        let mut it = line.split_whitespace();
        let head = it.next();
        let rest: Vec<&str> = it.collect();
        match head {
            Some("v") => {
                let p: Vec<f64> = rest.iter().map(|x| x.parse().unwrap()).collect();
                obj.positions.push([p[0], p[1], p[2]]);
            }
            Some("vt") => {
                let p: Vec<f64> = rest.iter().map(|x| x.parse().unwrap()).collect();
                obj.texcoords.push([p[0], p[1]]);
            }
            Some("f") => {
                let c: Vec<(usize, usize)> = rest
                    .iter()
                    .map(|x| {
                        let (a, b) = x.split_once('/').unwrap();
                        (a.parse().unwrap(), b.parse().unwrap())
                    })
                    .collect();
                obj.faces.push([c[0], c[1], c[2]]);
            }
            _ => {}
        }
    }
    obj
}

/// Attribute value from the root `<svg>` element.
pub fn svg_attr(svg: &str, name: &str) -> f64 {
    let root = &svg[svg.find("<svg").unwrap()..];
    let key = format!(" {name}=\"");
    let start = root.find(&key).unwrap() + key.len();
    root[start..start + root[start..].find('"').unwrap()].parse().unwrap()
}

pub fn svg_polylines(svg: &str, class: &str) -> Vec<Vec<(f64, f64)>> {
    let tag = format!("class=\"{class}\"");
    svg.lines()
        .filter(|l| l.contains("<polyline") && l.contains(&tag))
        .map(|l| {
            let start = l.find("points=\"").unwrap() + 8;
            let end = start + l[start..].find('"').unwrap();
            l[start..end]
                .split_whitespace()
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
}

pub fn vertical_extent(line: &[(f64, f64)]) -> f64 {
    let (lo, hi) = line.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    hi - lo
}
