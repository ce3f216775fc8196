use hbn::birkhoff::birkhoff_factorize;
use hbn::matrix::LaurentMatrix;

fn main() {
    let text = "32003 4\n853^0 3456^1 16541^3\n25636^-3 8120^-2\n280^-1\n31647^-1 9144^4 6871^6\n29058^-3 2111^-2 6613^-1 19579^0 23252^1 3081^2\n15379^-6 14220^-5 17834^-4 12795^-1\n20653^-4\n21195^-4 24895^1 22164^2 23288^3 989^4\n\n\n13744^-5 1^0\n19477^-5 10514^0\n\n\n8577^-2\n11207^-2\n";
    let m = LaurentMatrix::parse_text(text).unwrap();
    match birkhoff_factorize(&m) {
        Ok(f) => println!("ok: {}", f.splitting),
        Err(e) => println!("err: {e}"),
    }
}
