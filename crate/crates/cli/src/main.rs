fn main() {
    println!("gks");
}
