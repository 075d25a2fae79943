class Broken {
    int a;
    void f() {
        a = 1;

