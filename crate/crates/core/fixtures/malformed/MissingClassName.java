class {
    int a;
}
