class Symbol1 {
    void f() {
        Foo x = new Foo();
    }
}
