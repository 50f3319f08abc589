#!/usr/bin/env python3
"""Writes KDD-Cup-99-format connection records drawn from simple per-label
templates. The files stand in for the real dataset in tests and demos; they
are not a model of real traffic."""

import argparse
import gzip
import random

# label -> weight in the default mix
MIX = {
    "normal": 30, "smurf": 25, "neptune": 20, "back": 2, "teardrop": 2,
    "portsweep": 5, "ipsweep": 5, "satan": 4, "nmap": 1,
    "guess_passwd": 2, "warezclient": 2, "ftp_write": 1,
    "buffer_overflow": 1, "rootkit": 1,
}


def rate(rng, lo, hi):
    return f"{rng.uniform(lo, hi):.2f}"


def record(rng, label):
    f = {
        "duration": 0, "protocol_type": "tcp", "service": "http", "flag": "SF",
        "src_bytes": 0, "dst_bytes": 0, "land": 0, "wrong_fragment": 0, "urgent": 0,
        "hot": 0, "num_failed_logins": 0, "logged_in": 0, "num_compromised": 0,
        "root_shell": 0, "su_attempted": 0, "num_root": 0, "num_file_creations": 0,
        "num_shells": 0, "num_access_files": 0, "num_outbound_cmds": 0,
        "is_host_login": 0, "is_guest_login": 0, "count": 1, "srv_count": 1,
        "serror_rate": "0.00", "srv_serror_rate": "0.00", "rerror_rate": "0.00",
        "srv_rerror_rate": "0.00", "same_srv_rate": "1.00", "diff_srv_rate": "0.00",
        "srv_diff_host_rate": "0.00", "dst_host_count": 255, "dst_host_srv_count": 255,
        "dst_host_same_srv_rate": "1.00", "dst_host_diff_srv_rate": "0.00",
        "dst_host_same_src_port_rate": "0.00", "dst_host_srv_diff_host_rate": "0.00",
        "dst_host_serror_rate": "0.00", "dst_host_srv_serror_rate": "0.00",
        "dst_host_rerror_rate": "0.00", "dst_host_srv_rerror_rate": "0.00",
    }
    if label == "normal":
        f.update(service=rng.choice(["http", "http", "smtp", "ftp_data", "domain_u", "private"]),
                 src_bytes=rng.randint(150, 400), dst_bytes=rng.randint(300, 9000),
                 logged_in=1, count=rng.randint(1, 20), srv_count=rng.randint(1, 30),
                 dst_host_count=rng.randint(5, 255), dst_host_srv_count=rng.randint(50, 255),
                 dst_host_same_src_port_rate=rate(rng, 0, 0.2))
        if f["service"] == "domain_u":
            f["protocol_type"] = "udp"
    elif label == "smurf":
        f.update(protocol_type="icmp", service="ecr_i", src_bytes=rng.choice([520, 1032]),
                 count=511, srv_count=511, dst_host_same_src_port_rate="1.00")
    elif label == "neptune":
        f.update(service=rng.choice(["private", "private", "telnet", "http", "ftp"]), flag="S0",
                 count=rng.randint(100, 260), srv_count=rng.randint(5, 25), serror_rate="1.00",
                 srv_serror_rate="1.00", same_srv_rate=rate(rng, 0.02, 0.1), diff_srv_rate=rate(rng, 0.05, 0.08),
                 dst_host_srv_count=rng.randint(1, 25), dst_host_same_srv_rate=rate(rng, 0, 0.1),
                 dst_host_serror_rate="1.00", dst_host_srv_serror_rate="1.00")
    elif label == "back":
        f.update(src_bytes=54540, dst_bytes=rng.randint(7000, 8400), hot=2, logged_in=1,
                 num_compromised=1, count=rng.randint(1, 10), srv_count=rng.randint(1, 10))
    elif label == "teardrop":
        f.update(protocol_type="udp", service="private", src_bytes=28, wrong_fragment=3,
                 count=rng.randint(1, 100), srv_count=rng.randint(1, 100))
    elif label in ("portsweep", "satan", "nmap"):
        f.update(service=rng.choice(["private", "other", "ftp", "telnet", "finger", "ecr_i"]),
                 flag=rng.choice(["REJ", "RSTR", "RSTO", "SF"]), src_bytes=rng.choice([0, 0, 1]),
                 duration=rng.randint(0, 3), count=rng.randint(1, 5), srv_count=rng.randint(1, 5),
                 rerror_rate=rate(rng, 0.5, 1), srv_rerror_rate=rate(rng, 0.5, 1),
                 same_srv_rate=rate(rng, 0, 0.5), diff_srv_rate=rate(rng, 0.3, 1),
                 dst_host_count=rng.randint(1, 40), dst_host_srv_count=rng.randint(1, 10),
                 dst_host_same_srv_rate=rate(rng, 0, 0.3), dst_host_diff_srv_rate=rate(rng, 0.3, 1),
                 dst_host_rerror_rate=rate(rng, 0.4, 1), dst_host_srv_rerror_rate=rate(rng, 0.4, 1))
    elif label == "ipsweep":
        f.update(protocol_type="icmp", service=rng.choice(["eco_i", "ecr_i"]), src_bytes=rng.choice([8, 18, 20]),
                 count=rng.randint(1, 3), srv_count=rng.randint(1, 30), srv_diff_host_rate="1.00",
                 dst_host_count=rng.randint(1, 100), dst_host_srv_count=rng.randint(1, 100),
                 dst_host_diff_srv_rate=rate(rng, 0, 0.1), dst_host_srv_diff_host_rate=rate(rng, 0.5, 1))
    elif label in ("guess_passwd", "warezclient", "ftp_write"):
        f.update(service=rng.choice(["telnet", "ftp", "ftp_data", "pop_3"]),
                 flag=rng.choice(["SF", "RSTO"]), duration=rng.randint(0, 500),
                 src_bytes=rng.randint(100, 2000), dst_bytes=rng.randint(100, 3000),
                 hot=rng.randint(0, 28), num_failed_logins=1 if label == "guess_passwd" else 0,
                 logged_in=0 if label == "guess_passwd" else 1,
                 is_guest_login=1 if label == "warezclient" else 0,
                 dst_host_count=rng.randint(1, 50), dst_host_srv_count=rng.randint(1, 50))
    elif label in ("buffer_overflow", "rootkit"):
        f.update(service="telnet", duration=rng.randint(10, 300), src_bytes=rng.randint(1000, 3000),
                 dst_bytes=rng.randint(2000, 9000), hot=rng.randint(1, 3), logged_in=1,
                 root_shell=1, num_file_creations=rng.randint(0, 2), num_shells=rng.randint(0, 1),
                 num_access_files=rng.randint(0, 1), dst_host_count=rng.randint(1, 20),
                 dst_host_srv_count=rng.randint(1, 20))
    else:
        raise SystemExit(f"no template for {label}")
    return ",".join(str(v) for v in f.values()) + "," + label + "."


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--records", type=int, required=True)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    labels, weights = zip(*MIX.items())
    lines = [record(rng, rng.choices(labels, weights)[0]) for _ in range(args.records)]
    data = ("\n".join(lines) + "\n").encode()
    if args.out.endswith(".gz"):
        # mtime fixed so reruns are byte-identical.
        with open(args.out, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(data)
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)


if __name__ == "__main__":
    main()
