//! `--n` syntax: `500`, `100,200,400`, `start:stop:x2` or `start:stop:+k`.

use volconj::asymptotics::geometric_ladder;

pub fn parse_n_list(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    let ns = if s.contains(':') {
        parse_range(s)?
    } else {
        s.split(',')
            .map(|t| parse_n(t.trim()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if ns.is_empty() {
        return Err(format!("N list `{s}` is empty"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("N list `{s}` is not strictly increasing"));
    }
    Ok(ns)
}

fn parse_n(t: &str) -> Result<usize, String> {
    let n: usize = t
        .parse()
        .map_err(|_| format!("`{t}` is not a positive integer"))?;
    if n == 0 {
        return Err("N must be at least 1".into());
    }
    Ok(n)
}

fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!(
            "range `{s}` must look like start:stop:x2 or start:stop:+k"
        ));
    };
    let (start, stop) = (parse_n(start)?, parse_n(stop)?);
    if start > stop {
        return Err(format!("range `{s}` has start > stop"));
    }
    if let Some(ratio) = step.strip_prefix('x') {
        let ratio: usize = ratio.parse().map_err(|_| format!("bad ratio in `{s}`"))?;
        if ratio < 2 {
            return Err(format!("ratio in `{s}` must be at least 2"));
        }
        Ok(geometric_ladder(start, stop, ratio))
    } else if let Some(k) = step.strip_prefix('+') {
        let k: usize = k.parse().map_err(|_| format!("bad increment in `{s}`"))?;
        if k == 0 {
            return Err(format!("increment in `{s}` must be positive"));
        }
        Ok((start..=stop).step_by(k).collect())
    } else {
        Err(format!("step in `{s}` must start with `x` or `+`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_n_list("500").unwrap(), vec![500]);
        assert_eq!(parse_n_list("3, 5,8").unwrap(), vec![3, 5, 8]);
        assert_eq!(
            parse_n_list("100:6400:x2").unwrap(),
            vec![100, 200, 400, 800, 1600, 3200, 6400]
        );
        assert_eq!(parse_n_list("10:40:+10").unwrap(), vec![10, 20, 30, 40]);
        assert_eq!(parse_n_list("10:45:+10").unwrap(), vec![10, 20, 30, 40]);
    }

    #[test]
    fn rejects() {
        for bad in [
            "0", "", "5,3", "1:2", "4:2:x2", "1:8:x1", "1:8:+0", "1:8:*2", "a",
        ] {
            assert!(parse_n_list(bad).is_err(), "{bad}");
        }
    }
}
