class Lex {
    int @ x;
}
