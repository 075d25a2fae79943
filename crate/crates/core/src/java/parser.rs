use std::collections::{BTreeSet, HashMap};

use super::lexer::{tokenize, Token, TokenKind};
use super::model::*;
use super::FrontendError;

type PResult<T> = Result<T, FrontendError>;

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "double", "float", "int", "long", "short", "void"];
const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "transient",
    "volatile",
];
const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

/// Tokenizes and parses one file.
pub fn parse_source(path: &str, text: &str) -> PResult<SourceUnit> {
    let tokens = tokenize(text)?;
    parse_unit(path, text, &tokens)
}

/// Builds a [`SourceUnit`] from a token stream produced by [`tokenize`].
pub fn parse_unit(path: &str, text: &str, tokens: &[Token<'_>]) -> PResult<SourceUnit> {
    let mut p = Parser { toks: tokens, pos: 0, eof: text.len() };
    let mut classes: Vec<ClassModel> = Vec::new();

    while !p.at_end() {
        if p.eat_keyword("package") || p.eat_keyword("import") {
            p.skip_past(";")?;
            continue;
        }
        if p.eat_punct(";") {
            continue;
        }
        let class = p.class_decl()?;
        if classes.iter().any(|c| c.name == class.name) {
            return Err(FrontendError::DuplicateClass { name: class.name, span: class.span });
        }
        classes.push(class);
    }
    Ok(SourceUnit { path: path.to_string(), text: text.to_string(), classes })
}

struct Parser<'t, 's> {
    toks: &'t [Token<'s>],
    pos: usize,
    eof: usize,
}

#[derive(Default)]
struct Modifiers {
    is_static: bool,
    is_abstract: bool,
}

#[derive(Debug, Clone)]
struct Local {
    ty: String,
    is_param: bool,
}

/// Mutable state while reducing one method body to events.
struct Body {
    class_name: String,
    events: Vec<Event>,
    tries: Vec<TryBlock>,
    next_try: usize,
    scopes: Vec<HashMap<String, Local>>,
}

impl Body {
    fn lookup(&self, name: &str) -> Option<&Local> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn declare(&mut self, name: &str, ty: &str) {
        self.scopes
            .last_mut()
            .expect("body always has a scope")
            .insert(name.to_string(), Local { ty: ty.to_string(), is_param: false });
    }

    fn push(&mut self, event: Event) -> usize {
        self.events.push(event);
        self.events.len() - 1
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            events: self.events.len(),
            tries: self.tries.len(),
            next_try: self.next_try,
            scopes: self.scopes.len(),
        }
    }

    fn rollback(&mut self, cp: &Checkpoint) {
        self.events.truncate(cp.events);
        self.tries.truncate(cp.tries);
        self.next_try = cp.next_try;
        self.scopes.truncate(cp.scopes);
    }
}

struct Checkpoint {
    events: usize,
    tries: usize,
    next_try: usize,
    scopes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Field(String),
    Param(String),
    AssignFieldFromParam(String, String),
    Other,
}

#[derive(Debug, Clone)]
struct Expr {
    ty: Option<String>,
    shape: Shape,
    /// Event created by this exact name expression; rewritten when assigned to.
    event: Option<usize>,
    /// Local variable named by this exact expression.
    local: Option<String>,
    /// Dotted path for labeling calls on foreign receivers.
    path: Option<String>,
}

impl Expr {
    fn other(ty: Option<String>) -> Self {
        Expr { ty, shape: Shape::Other, event: None, local: None, path: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum StmtShape {
    Return(Shape),
    Expr(Shape),
    Other,
}

impl<'t, 's> Parser<'t, 's> {
    // ---- token helpers ----------------------------------------------------

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'t Token<'s>> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token<'s>> {
        self.toks.get(self.pos + n)
    }

    fn bump(&mut self) -> Option<&'t Token<'s>> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> Span {
        self.peek().map_or(Span::new(self.eof, self.eof), |t| t.span)
    }

    fn prev_span(&self) -> Span {
        self.pos.checked_sub(1).and_then(|i| self.toks.get(i)).map_or(Span::default(), |t| t.span)
    }

    fn check_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn check_keyword(&self, k: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn check_ident(&self) -> bool {
        self.peek().is_some_and(|t| t.kind == TokenKind::Ident)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.check_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        let hit = self.check_keyword(k);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(FrontendError::Parse { span: self.here(), message: message.into() })
    }

    fn expect_punct(&mut self, p: &str) -> PResult<Span> {
        match self.peek() {
            Some(t) if t.is_punct(p) => {
                self.pos += 1;
                Ok(t.span)
            }
            Some(t) => self.error(format!("expected `{p}`, found `{}`", t.text)),
            None => self.error(format!("expected `{p}`, found end of input")),
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<&'t Token<'s>> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => self.error(format!("expected {what}, found `{}`", t.text)),
            None => self.error(format!("expected {what}, found end of input")),
        }
    }

    fn skip_past(&mut self, p: &str) -> PResult<()> {
        while let Some(t) = self.bump() {
            if t.is_punct(p) {
                return Ok(());
            }
        }
        self.error(format!("expected `{p}`"))
    }

    // ---- declarations -----------------------------------------------------

    fn modifiers(&mut self) -> Modifiers {
        let mut m = Modifiers::default();
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Keyword || !MODIFIERS.contains(&t.text) {
                break;
            }
            match t.text {
                "static" => m.is_static = true,
                "abstract" => m.is_abstract = true,
                _ => {}
            }
            self.pos += 1;
        }
        m
    }

    fn class_decl(&mut self) -> PResult<ClassModel> {
        let start = self.here();
        let mods = self.modifiers();
        if self.check_keyword("interface") {
            return self.error("interfaces are not supported");
        }
        if !self.eat_keyword("class") {
            return match self.peek() {
                Some(t) => self.error(format!("expected `class`, found `{}`", t.text)),
                None => self.error("expected `class`"),
            };
        }
        let name = self.expect_ident("class name")?.text.to_string();
        let superclass = if self.eat_keyword("extends") { Some(self.qualified_name()?) } else { None };
        if self.eat_keyword("implements") {
            loop {
                self.qualified_name()?;
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        if self.check_punct("<") {
            return self.error("generic classes are not supported");
        }
        self.expect_punct("{")?;

        let mut class = ClassModel {
            name,
            superclass,
            fields: Vec::new(),
            methods: Vec::new(),
            is_abstract: mods.is_abstract,
            span: start,
        };
        loop {
            if self.at_end() {
                return Err(FrontendError::Parse {
                    span: start,
                    message: format!("unbalanced braces: class `{}` is never closed", class.name),
                });
            }
            if self.check_punct("}") {
                break;
            }
            self.member(&mut class)?;
        }
        let end = self.expect_punct("}")?;
        class.span = start.to(end);
        Ok(class)
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.expect_ident("type name")?.text.to_string();
        while self.check_punct(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident) {
            self.pos += 1;
            name.push('.');
            name.push_str(self.bump().expect("checked").text);
        }
        Ok(name)
    }

    fn parse_type(&mut self) -> PResult<String> {
        let mut ty = match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text) => {
                self.pos += 1;
                t.text.to_string()
            }
            Some(t) if t.kind == TokenKind::Ident => self.qualified_name()?,
            Some(t) => return self.error(format!("expected a type, found `{}`", t.text)),
            None => return self.error("expected a type"),
        };
        if self.check_punct("<") {
            return self.error("generic types are not supported");
        }
        while self.check_punct("[") && self.peek_at(1).is_some_and(|t| t.is_punct("]")) {
            self.pos += 2;
            ty.push_str("[]");
        }
        Ok(ty)
    }

    fn array_dims(&mut self, ty: &mut String) {
        while self.check_punct("[") && self.peek_at(1).is_some_and(|t| t.is_punct("]")) {
            self.pos += 2;
            ty.push_str("[]");
        }
    }

    fn member(&mut self, class: &mut ClassModel) -> PResult<()> {
        if self.eat_punct(";") {
            return Ok(());
        }
        let start = self.here();
        let mods = self.modifiers();

        if self.check_punct("{") {
            // Initializer blocks run outside any method entity; their events are dropped.
            let mut body = self.new_body(&class.name, &[]);
            self.block(&mut body)?;
            return Ok(());
        }
        if self.check_keyword("class") || self.check_keyword("interface") {
            return self.error("nested classes are not supported");
        }

        let is_call_shaped = self.check_ident() && self.peek_at(1).is_some_and(|t| t.is_punct("("));
        if is_call_shaped {
            let name = self.peek().expect("checked").text;
            if name != class.name {
                return self.error(format!("method `{name}` is missing a return type"));
            }
            self.pos += 1;
            let method = self.method_rest(class, start, name.to_string(), None, true, &mods)?;
            return push_method(class, method);
        }

        let ty = self.parse_type()?;
        let name_tok = self.expect_ident("member name")?;
        if self.check_punct("(") {
            let ret = if ty == "void" { None } else { Some(ty) };
            let method = self.method_rest(class, start, name_tok.text.to_string(), ret, false, &mods)?;
            return push_method(class, method);
        }

        let mut name_tok = name_tok;
        loop {
            let mut field_ty = ty.clone();
            self.array_dims(&mut field_ty);
            let field = FieldDecl {
                name: name_tok.text.to_string(),
                declared_type: field_ty,
                is_static: mods.is_static,
                span: name_tok.span,
            };
            if class.field(&field.name).is_some() {
                return Err(FrontendError::DuplicateMember {
                    class: class.name.clone(),
                    member: field.name,
                    span: name_tok.span,
                });
            }
            class.fields.push(field);
            if self.eat_punct("=") {
                self.skip_initializer()?;
            }
            if self.eat_punct(",") {
                name_tok = self.expect_ident("field name")?;
                continue;
            }
            self.expect_punct(";")?;
            return Ok(());
        }
    }

    /// Skips a field initializer up to the next top-level `,` or `;`.
    fn skip_initializer(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Punct {
                match t.text {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        if depth == 0 {
                            return self.error(format!("unexpected `{}` in initializer", t.text));
                        }
                        depth -= 1;
                    }
                    "," | ";" if depth == 0 => return Ok(()),
                    _ => {}
                }
            }
            self.pos += 1;
        }
        self.error("unterminated field initializer")
    }

    fn method_rest(
        &mut self,
        class: &ClassModel,
        start: Span,
        name: String,
        return_type: Option<String>,
        is_constructor: bool,
        mods: &Modifiers,
    ) -> PResult<MethodDecl> {
        let params = self.params()?;
        if self.eat_keyword("throws") {
            loop {
                self.qualified_name()?;
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        let mut method = MethodDecl {
            name,
            params,
            return_type,
            is_constructor,
            is_static: mods.is_static,
            is_abstract: false,
            body: Vec::new(),
            try_blocks: Vec::new(),
            shape: BodyShape::Other,
            span: start,
        };
        if self.eat_punct(";") {
            method.is_abstract = true;
            method.span = start.to(self.prev_span());
            return Ok(method);
        }
        if !self.check_punct("{") {
            return self.error(format!("expected method body for `{}`", method.name));
        }
        let mut body = self.new_body(&class.name, &method.params);
        let shapes = self.block(&mut body)?;
        method.span = start.to(self.prev_span());
        method.shape = body_shape(&shapes);
        body.tries.sort_by_key(|t| t.span.start);
        method.body = body.events;
        method.try_blocks = body.tries;
        Ok(method)
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if self.eat_punct(")") {
            return Ok(params);
        }
        loop {
            self.eat_keyword("final");
            let mut ty = self.parse_type()?;
            if self.eat_punct("...") {
                ty.push_str("[]");
            }
            let name = if self.check_ident() {
                self.bump().expect("checked").text.to_string()
            } else {
                // prototype-style parameter list, e.g. `void add(Poly);`
                format!("arg{}", params.len())
            };
            self.array_dims(&mut ty);
            params.push(Param { name, ty });
            if self.eat_punct(")") {
                break;
            }
            self.expect_punct(",")?;
        }
        let mut seen = BTreeSet::new();
        for p in &params {
            if !seen.insert(&p.name) {
                return self.error(format!("duplicate parameter `{}`", p.name));
            }
        }
        Ok(params)
    }

    fn new_body(&self, class_name: &str, params: &[Param]) -> Body {
        let scope = params.iter().map(|p| (p.name.clone(), Local { ty: p.ty.clone(), is_param: true })).collect();
        Body {
            class_name: class_name.to_string(),
            events: Vec::new(),
            tries: Vec::new(),
            next_try: 1,
            scopes: vec![scope],
        }
    }

    // ---- statements -------------------------------------------------------

    /// Parses `{ ... }` and returns the shapes of its top-level statements.
    fn block(&mut self, body: &mut Body) -> PResult<Vec<StmtShape>> {
        let open = self.expect_punct("{")?;
        body.scopes.push(HashMap::new());
        let mut shapes = Vec::new();
        loop {
            if self.at_end() {
                return Err(FrontendError::Parse {
                    span: open,
                    message: "unbalanced braces: block is never closed".into(),
                });
            }
            if self.eat_punct("}") {
                break;
            }
            shapes.push(self.statement(body)?);
        }
        body.scopes.pop();
        Ok(shapes)
    }

    fn statement(&mut self, body: &mut Body) -> PResult<StmtShape> {
        let start = self.pos;
        let cp = body.checkpoint();
        match self.statement_inner(body) {
            Ok(shape) => Ok(shape),
            Err(err) => {
                self.pos = start;
                body.rollback(&cp);
                self.recover(body, err)?;
                Ok(StmtShape::Other)
            }
        }
    }

    /// Skips an unparseable statement and salvages the member references it contains.
    fn recover(&mut self, body: &mut Body, err: FrontendError) -> PResult<()> {
        let start = self.pos;
        let start_span = self.here();
        let mut depth = 0usize;
        let mut end = None;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Punct {
                match t.text {
                    "(" | "[" => depth += 1,
                    "{" => depth += 1,
                    ")" | "]" => depth = depth.saturating_sub(1),
                    "}" if depth == 0 => {
                        end = Some(self.pos);
                        break;
                    }
                    "}" => {
                        depth -= 1;
                        if depth == 0 && self.toks[start..self.pos].iter().any(|t| t.is_punct("{")) {
                            self.pos += 1;
                            end = Some(self.pos);
                            break;
                        }
                    }
                    ";" if depth == 0 => {
                        self.pos += 1;
                        end = Some(self.pos);
                        break;
                    }
                    _ => {}
                }
            }
            self.pos += 1;
        }
        let Some(end) = end else {
            return Err(err);
        };
        if end == start {
            return Err(err);
        }

        let skipped = &self.toks[start..end];
        let before = body.events.len();
        for (i, t) in skipped.iter().enumerate() {
            if t.kind != TokenKind::Ident {
                continue;
            }
            let after_dot = i > 0 && skipped[i - 1].is_punct(".");
            let receiver_this = i > 1 && skipped[i - 1].is_punct(".") && skipped[i - 2].is_keyword("this");
            if after_dot && !receiver_this {
                continue;
            }
            let next = skipped.get(i + 1);
            if next.is_some_and(|n| n.is_punct("(")) {
                let mut ev = Event::new(EventKind::SelfCall, t.text, t.span);
                ev.arg_types = vec![None; count_args(&skipped[i + 1..])];
                body.push(ev);
                continue;
            }
            match body.lookup(t.text) {
                Some(l) if l.is_param => {
                    body.push(Event::new(EventKind::ParamRead, t.text, t.span));
                }
                Some(_) => {}
                None => {
                    let writes = next.is_some_and(|n| {
                        n.kind == TokenKind::Punct && (ASSIGN_OPS.contains(&n.text) || n.text == "++" || n.text == "--")
                    });
                    let kind = if writes { EventKind::FieldWrite } else { EventKind::FieldRead };
                    body.push(Event::new(kind, t.text, t.span));
                }
            }
        }
        if body.events.len() == before {
            let span = start_span.to(self.prev_span());
            body.push(Event::new(EventKind::LocalOp, "<unparsed>", span));
        }
        Ok(())
    }

    fn statement_inner(&mut self, body: &mut Body) -> PResult<StmtShape> {
        let Some(tok) = self.peek() else {
            return self.error("expected a statement");
        };
        if tok.is_punct("{") {
            self.block(body)?;
            return Ok(StmtShape::Other);
        }
        if tok.is_punct(";") {
            self.pos += 1;
            return Ok(StmtShape::Other);
        }
        if tok.kind == TokenKind::Keyword {
            match tok.text {
                "if" => {
                    self.pos += 1;
                    self.paren_expr(body)?;
                    self.statement(body)?;
                    if self.eat_keyword("else") {
                        self.statement(body)?;
                    }
                    return Ok(StmtShape::Other);
                }
                "while" => {
                    self.pos += 1;
                    self.paren_expr(body)?;
                    self.statement(body)?;
                    return Ok(StmtShape::Other);
                }
                "do" => {
                    self.pos += 1;
                    self.statement(body)?;
                    if !self.eat_keyword("while") {
                        return self.error("expected `while` after `do` body");
                    }
                    self.paren_expr(body)?;
                    self.expect_punct(";")?;
                    return Ok(StmtShape::Other);
                }
                "for" => {
                    self.pos += 1;
                    self.for_statement(body)?;
                    return Ok(StmtShape::Other);
                }
                "return" => {
                    self.pos += 1;
                    if self.eat_punct(";") {
                        return Ok(StmtShape::Other);
                    }
                    let e = self.expr(body)?;
                    self.expect_punct(";")?;
                    return Ok(StmtShape::Return(e.shape));
                }
                "throw" => {
                    self.pos += 1;
                    self.expr(body)?;
                    self.expect_punct(";")?;
                    return Ok(StmtShape::Other);
                }
                "break" | "continue" => {
                    self.pos += 1;
                    if self.check_ident() {
                        self.pos += 1;
                    }
                    self.expect_punct(";")?;
                    return Ok(StmtShape::Other);
                }
                "try" => {
                    self.try_statement(body)?;
                    return Ok(StmtShape::Other);
                }
                "synchronized" => {
                    self.pos += 1;
                    self.paren_expr(body)?;
                    self.block(body)?;
                    return Ok(StmtShape::Other);
                }
                "switch" => return self.error("`switch` statements are not supported"),
                "class" | "interface" => return self.error("local classes are not supported"),
                _ => {}
            }
        }
        if tok.kind == TokenKind::Ident && self.peek_at(1).is_some_and(|t| t.is_punct(":")) {
            // labeled statement
            self.pos += 2;
            return self.statement(body);
        }
        if self.looks_like_local_decl() {
            self.local_decl(body)?;
            self.expect_punct(";")?;
            return Ok(StmtShape::Other);
        }
        let e = self.expr(body)?;
        self.expect_punct(";")?;
        Ok(StmtShape::Expr(e.shape))
    }

    fn paren_expr(&mut self, body: &mut Body) -> PResult<Expr> {
        self.expect_punct("(")?;
        let e = self.expr(body)?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn for_statement(&mut self, body: &mut Body) -> PResult<()> {
        self.expect_punct("(")?;
        body.scopes.push(HashMap::new());

        let enhanced = {
            let save = self.pos;
            self.eat_keyword("final");
            let hit =
                self.parse_type().is_ok() && self.check_ident() && self.peek_at(1).is_some_and(|t| t.is_punct(":"));
            self.pos = save;
            hit
        };
        if enhanced {
            self.eat_keyword("final");
            let ty = self.parse_type()?;
            let name = self.expect_ident("loop variable")?;
            body.declare(name.text, &ty);
            body.push(Event::new(EventKind::LocalOp, name.text, name.span));
            self.expect_punct(":")?;
            self.expr(body)?;
        } else {
            if !self.check_punct(";") {
                if self.looks_like_local_decl() {
                    self.local_decl(body)?;
                } else {
                    self.expr_list(body)?;
                }
            }
            self.expect_punct(";")?;
            if !self.check_punct(";") {
                self.expr(body)?;
            }
            self.expect_punct(";")?;
            if !self.check_punct(")") {
                self.expr_list(body)?;
            }
        }
        self.expect_punct(")")?;
        self.statement(body)?;
        body.scopes.pop();
        Ok(())
    }

    fn expr_list(&mut self, body: &mut Body) -> PResult<()> {
        loop {
            self.expr(body)?;
            if !self.eat_punct(",") {
                return Ok(());
            }
        }
    }

    fn try_statement(&mut self, body: &mut Body) -> PResult<()> {
        let start = self.here();
        self.pos += 1; // `try`
        let id = format!("try{}", body.next_try);
        body.next_try += 1;
        if self.check_punct("(") {
            return self.error("try-with-resources is not supported");
        }

        let body_start = body.events.len();
        self.block(body)?;
        let body_end = body.events.len();

        let mut exception_types = Vec::new();
        while self.eat_keyword("catch") {
            self.expect_punct("(")?;
            self.eat_keyword("final");
            let mut ty = self.parse_type()?;
            exception_types.push(ty.clone());
            while self.eat_punct("|") {
                ty = self.parse_type()?;
                exception_types.push(ty.clone());
            }
            let var = self.expect_ident("exception variable")?;
            self.expect_punct(")")?;
            body.scopes.push(HashMap::new());
            body.declare(var.text, &ty);
            self.block(body)?;
            body.scopes.pop();
        }
        let handlers_end = body.events.len();
        let has_finally = self.eat_keyword("finally");
        if has_finally {
            self.block(body)?;
        }
        if exception_types.is_empty() && !has_finally {
            return self.error("`try` without `catch` or `finally`");
        }
        body.tries.push(TryBlock {
            id,
            body: body_start..body_end,
            handlers: body_end..handlers_end,
            exception_types,
            span: start.to(self.prev_span()),
        });
        Ok(())
    }

    fn looks_like_local_decl(&self) -> bool {
        let mut i = self.pos;
        let tok = |i: usize| self.toks.get(i);
        if tok(i).is_some_and(|t| t.is_keyword("final")) {
            i += 1;
        }
        match tok(i) {
            Some(t) if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text) && t.text != "void" => {
                return !tok(i + 1).is_some_and(|t| t.is_punct("."));
            }
            Some(t) if t.kind == TokenKind::Ident => i += 1,
            _ => return false,
        }
        while tok(i).is_some_and(|t| t.is_punct(".")) && tok(i + 1).is_some_and(|t| t.kind == TokenKind::Ident) {
            i += 2;
        }
        while tok(i).is_some_and(|t| t.is_punct("[")) && tok(i + 1).is_some_and(|t| t.is_punct("]")) {
            i += 2;
        }
        tok(i).is_some_and(|t| t.kind == TokenKind::Ident)
    }

    fn local_decl(&mut self, body: &mut Body) -> PResult<()> {
        self.eat_keyword("final");
        let ty = self.parse_type()?;
        loop {
            let name = self.expect_ident("variable name")?;
            let mut var_ty = ty.clone();
            self.array_dims(&mut var_ty);
            body.push(Event::new(EventKind::LocalOp, name.text, name.span));
            if self.eat_punct("=") {
                if self.check_punct("{") {
                    self.array_initializer(body)?;
                } else {
                    self.expr(body)?;
                }
            }
            // Declared after the initializer: `int a = a;` reads the field.
            body.declare(name.text, &var_ty);
            if !self.eat_punct(",") {
                return Ok(());
            }
        }
    }

    fn array_initializer(&mut self, body: &mut Body) -> PResult<()> {
        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            if self.check_punct("{") {
                self.array_initializer(body)?;
            } else {
                self.expr(body)?;
            }
            if !self.eat_punct(",") {
                self.expect_punct("}")?;
                break;
            }
        }
        Ok(())
    }

    // ---- expressions ------------------------------------------------------

    fn expr(&mut self, body: &mut Body) -> PResult<Expr> {
        let lhs = self.ternary(body)?;
        let Some(op) = self.peek().filter(|t| t.kind == TokenKind::Punct && ASSIGN_OPS.contains(&t.text)) else {
            return Ok(lhs);
        };
        self.pos += 1;
        let op_span = op.span;
        let target_kind = self.mark_write(body, &lhs, op_span)?;
        let rhs = self.expr(body)?;

        let shape = match (&lhs.shape, &rhs.shape, op.text) {
            (Shape::Field(f), Shape::Param(p), "=") if target_kind == Some(EventKind::FieldWrite) => {
                Shape::AssignFieldFromParam(f.clone(), p.clone())
            }
            _ => Shape::Other,
        };
        Ok(Expr { ty: lhs.ty, shape, event: None, local: None, path: None })
    }

    /// Turns the read recorded for an assignment target into a write.
    fn mark_write(&mut self, body: &mut Body, target: &Expr, at: Span) -> PResult<Option<EventKind>> {
        if let Some(idx) = target.event {
            let ev = &mut body.events[idx];
            ev.kind = match ev.kind {
                EventKind::FieldRead | EventKind::FieldWrite => EventKind::FieldWrite,
                _ => EventKind::LocalOp,
            };
            return Ok(Some(ev.kind));
        }
        if let Some(local) = &target.local {
            body.push(Event::new(EventKind::LocalOp, local.clone(), at));
            return Ok(Some(EventKind::LocalOp));
        }
        if target.path.is_some() {
            // write through a foreign receiver, e.g. `b.x = 1`
            return Ok(None);
        }
        Err(FrontendError::Parse { span: at, message: "invalid assignment target".into() })
    }

    fn ternary(&mut self, body: &mut Body) -> PResult<Expr> {
        let cond = self.binary(body, 0)?;
        if !self.eat_punct("?") {
            return Ok(cond);
        }
        let a = self.expr(body)?;
        self.expect_punct(":")?;
        let b = self.ternary(body)?;
        Ok(Expr::other(a.ty.or(b.ty)))
    }

    fn binary(&mut self, body: &mut Body, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary(body)?;
        while let Some(tok) = self.peek() {
            let Some(prec) = binary_precedence(tok) else { break };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            if tok.is_keyword("instanceof") {
                self.parse_type()?;
                lhs = Expr::other(Some("boolean".into()));
                continue;
            }
            let rhs = self.binary(body, prec + 1)?;
            lhs = Expr::other(binary_type(tok.text, lhs.ty.as_deref(), rhs.ty.as_deref()));
        }
        Ok(lhs)
    }

    fn unary(&mut self, body: &mut Body) -> PResult<Expr> {
        let Some(tok) = self.peek() else {
            return self.error("expected an expression");
        };
        if tok.kind == TokenKind::Punct {
            match tok.text {
                "++" | "--" => {
                    self.pos += 1;
                    let operand = self.unary(body)?;
                    self.mark_write(body, &operand, tok.span)?;
                    return Ok(Expr::other(operand.ty));
                }
                "+" | "-" | "~" => {
                    self.pos += 1;
                    let operand = self.unary(body)?;
                    return Ok(Expr::other(operand.ty));
                }
                "!" => {
                    self.pos += 1;
                    self.unary(body)?;
                    return Ok(Expr::other(Some("boolean".into())));
                }
                "(" => {
                    if let Some(ty) = self.try_cast()? {
                        self.unary(body)?;
                        return Ok(Expr::other(Some(ty)));
                    }
                }
                _ => {}
            }
        }
        self.postfix(body)
    }

    /// Consumes `(Type)` when it is followed by a castable operand.
    fn try_cast(&mut self) -> PResult<Option<String>> {
        let save = self.pos;
        self.pos += 1;
        let primitive = self.peek().is_some_and(|t| t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text));
        let ty = match self.parse_type() {
            Ok(ty) => ty,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        if !self.eat_punct(")") {
            self.pos = save;
            return Ok(None);
        }
        let castable = match self.peek() {
            Some(t) => match t.kind {
                TokenKind::Ident | TokenKind::Literal(_) => true,
                TokenKind::Keyword => matches!(t.text, "this" | "new" | "super"),
                TokenKind::Punct => matches!(t.text, "(" | "!" | "~") || (primitive && matches!(t.text, "-" | "+")),
            },
            None => false,
        };
        if castable {
            Ok(Some(ty))
        } else {
            self.pos = save;
            Ok(None)
        }
    }

    fn args(&mut self, body: &mut Body) -> PResult<Vec<Option<String>>> {
        self.expect_punct("(")?;
        let mut types = Vec::new();
        if self.eat_punct(")") {
            return Ok(types);
        }
        loop {
            types.push(self.expr(body)?.ty);
            if self.eat_punct(")") {
                return Ok(types);
            }
            self.expect_punct(",")?;
        }
    }

    fn call_event(
        &mut self,
        body: &mut Body,
        kind: EventKind,
        target: &str,
        span: Span,
        receiver: Receiver,
    ) -> PResult<()> {
        let mut ev = Event::new(kind, target, span);
        ev.receiver = receiver;
        let idx = body.push(ev);
        let args = self.args(body)?;
        body.events[idx].arg_types = args;
        Ok(())
    }

    fn field_ref(&mut self, body: &mut Body, name: &str, span: Span, receiver: Receiver) -> Expr {
        let mut ev = Event::new(EventKind::FieldRead, name, span);
        ev.receiver = receiver;
        let idx = body.push(ev);
        Expr {
            ty: None,
            shape: Shape::Field(name.to_string()),
            event: Some(idx),
            local: None,
            path: Some(name.to_string()),
        }
    }

    fn primary(&mut self, body: &mut Body) -> PResult<Expr> {
        let Some(tok) = self.bump() else {
            return self.error("expected an expression");
        };
        match tok.kind {
            TokenKind::Literal(kind) => Ok(Expr::other(kind.java_type().map(str::to_string))),
            TokenKind::Ident => {
                if self.check_punct("(") {
                    self.call_event(body, EventKind::SelfCall, tok.text, tok.span, Receiver::Implicit)?;
                    return Ok(Expr::other(None));
                }
                match body.lookup(tok.text).cloned() {
                    Some(local) if local.is_param => {
                        let idx = body.push(Event::new(EventKind::ParamRead, tok.text, tok.span));
                        Ok(Expr {
                            ty: Some(local.ty),
                            shape: Shape::Param(tok.text.to_string()),
                            event: Some(idx),
                            local: None,
                            path: Some(tok.text.to_string()),
                        })
                    }
                    Some(local) => Ok(Expr {
                        ty: Some(local.ty),
                        shape: Shape::Other,
                        event: None,
                        local: Some(tok.text.to_string()),
                        path: Some(tok.text.to_string()),
                    }),
                    None => Ok(self.field_ref(body, tok.text, tok.span, Receiver::Implicit)),
                }
            }
            TokenKind::Keyword => match tok.text {
                "this" | "super" => {
                    let via_super = tok.text == "super";
                    if self.check_punct("(") {
                        let (target, receiver) = if via_super {
                            ("super".to_string(), Receiver::Super)
                        } else {
                            (body.class_name.clone(), Receiver::This)
                        };
                        self.call_event(body, EventKind::CtorCall, &target, tok.span, receiver)?;
                        return Ok(Expr::other(None));
                    }
                    let receiver = if via_super { Receiver::Super } else { Receiver::Implicit };
                    if !self.eat_punct(".") {
                        if via_super {
                            return self.error("expected `.` after `super`");
                        }
                        let mut e = Expr::other(Some(body.class_name.clone()));
                        e.path = Some("this".into());
                        return Ok(e);
                    }
                    let name = self.expect_ident("member name")?;
                    if self.check_punct("(") {
                        self.call_event(body, EventKind::SelfCall, name.text, name.span, receiver)?;
                        return Ok(Expr::other(None));
                    }
                    Ok(self.field_ref(body, name.text, name.span, receiver))
                }
                "new" => self.creation(body, tok.span),
                k if PRIMITIVES.contains(&k) && self.check_punct(".") => {
                    // `int.class`
                    self.pos += 1;
                    if !self.eat_keyword("class") {
                        return self.error("expected `class`");
                    }
                    Ok(Expr::other(Some("Class".into())))
                }
                other => self.error_at(tok.span, format!("unexpected `{other}` in expression")),
            },
            TokenKind::Punct => match tok.text {
                "(" => {
                    let e = self.expr(body)?;
                    self.expect_punct(")")?;
                    Ok(Expr::other(e.ty))
                }
                other => self.error_at(tok.span, format!("unexpected `{other}` in expression")),
            },
        }
    }

    fn error_at<T>(&self, span: Span, message: String) -> PResult<T> {
        Err(FrontendError::Parse { span, message })
    }

    fn creation(&mut self, body: &mut Body, new_span: Span) -> PResult<Expr> {
        let mut ty = match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text) => {
                self.pos += 1;
                t.text.to_string()
            }
            _ => self.qualified_name()?,
        };
        if self.check_punct("<") {
            return self.error("generic types are not supported");
        }
        if self.check_punct("(") {
            let simple = ty.rsplit('.').next().unwrap_or(&ty).to_string();
            self.call_event(body, EventKind::CtorCall, &simple, new_span, Receiver::Implicit)?;
            if self.check_punct("{") {
                return self.error("anonymous classes are not supported");
            }
            return Ok(Expr::other(Some(ty)));
        }
        let mut dims = 0;
        while self.eat_punct("[") {
            if !self.eat_punct("]") {
                self.expr(body)?;
                self.expect_punct("]")?;
            }
            dims += 1;
        }
        if dims == 0 {
            return self.error("expected `(` or `[` after type in `new` expression");
        }
        if self.check_punct("{") {
            self.array_initializer(body)?;
        }
        ty.push_str(&"[]".repeat(dims));
        Ok(Expr::other(Some(ty)))
    }

    fn postfix(&mut self, body: &mut Body) -> PResult<Expr> {
        let mut e = self.primary(body)?;
        loop {
            if self.eat_punct(".") {
                if self.eat_keyword("class") {
                    e = Expr::other(Some("Class".into()));
                    continue;
                }
                let name = self.expect_ident("member name")?;
                let path = e.path.as_ref().map(|p| format!("{p}.{}", name.text));
                if self.check_punct("(") {
                    let label = path.clone().unwrap_or_else(|| format!(".{}", name.text));
                    self.call_event(body, EventKind::LocalOp, &label, name.span, Receiver::Implicit)?;
                    e = Expr::other(None);
                    e.path = path;
                } else {
                    e = Expr { ty: None, shape: Shape::Other, event: None, local: None, path };
                }
                continue;
            }
            if self.eat_punct("[") {
                self.expr(body)?;
                self.expect_punct("]")?;
                let elem = e.ty.as_deref().and_then(|t| t.strip_suffix("[]")).map(str::to_string);
                // element writes count as writes of the array-holding variable
                e = Expr { ty: elem, shape: Shape::Other, event: e.event, local: e.local, path: e.path };
                continue;
            }
            if let Some(t) = self.peek().filter(|t| t.is_punct("++") || t.is_punct("--")) {
                self.pos += 1;
                self.mark_write(body, &e, t.span)?;
                e = Expr::other(e.ty);
                continue;
            }
            return Ok(e);
        }
    }
}

fn push_method(class: &mut ClassModel, method: MethodDecl) -> PResult<()> {
    let sig = method.signature();
    if class.methods.iter().any(|m| m.signature() == sig) {
        return Err(FrontendError::DuplicateMember { class: class.name.clone(), member: sig, span: method.span });
    }
    class.methods.push(method);
    Ok(())
}

fn body_shape(statements: &[StmtShape]) -> BodyShape {
    match statements {
        [StmtShape::Return(Shape::Field(f))] => BodyShape::ReturnsName(f.clone()),
        [StmtShape::Expr(Shape::AssignFieldFromParam(f, p))] => {
            BodyShape::AssignsParam { field: f.clone(), param: p.clone() }
        }
        _ => BodyShape::Other,
    }
}

fn binary_precedence(tok: &Token<'_>) -> Option<u8> {
    if tok.is_keyword("instanceof") {
        return Some(7);
    }
    if tok.kind != TokenKind::Punct {
        return None;
    }
    Some(match tok.text {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

fn binary_type(op: &str, a: Option<&str>, b: Option<&str>) -> Option<String> {
    match op {
        "||" | "&&" | "==" | "!=" | "<" | ">" | "<=" | ">=" => Some("boolean".into()),
        "+" if a == Some("String") || b == Some("String") => Some("String".into()),
        _ => match (a, b) {
            (Some("double"), Some(_)) | (Some(_), Some("double")) => Some("double".into()),
            (Some("float"), Some(_)) | (Some(_), Some("float")) => Some("float".into()),
            (Some("long"), Some(_)) | (Some(_), Some("long")) => Some("long".into()),
            (Some(x), Some(y)) if is_integral(x) && is_integral(y) => Some("int".into()),
            _ => None,
        },
    }
}

fn is_integral(ty: &str) -> bool {
    matches!(ty, "int" | "short" | "byte" | "char")
}

/// Number of top-level arguments in a token slice starting at `(`.
fn count_args(toks: &[Token<'_>]) -> usize {
    let mut depth = 0usize;
    let mut commas = 0;
    let mut empty = true;
    for t in toks {
        match t.text {
            "(" | "[" | "{" if t.kind == TokenKind::Punct => {
                depth += 1;
                if depth == 1 {
                    continue;
                }
            }
            ")" | "]" | "}" if t.kind == TokenKind::Punct => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    break;
                }
            }
            "," if t.kind == TokenKind::Punct && depth == 1 => commas += 1,
            _ => {}
        }
        if depth >= 1 {
            empty = false;
        }
    }
    if empty {
        0
    } else {
        commas + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(src: &str) -> SourceUnit {
        parse_source("t.java", src).unwrap()
    }

    fn events(m: &MethodDecl) -> Vec<(EventKind, &str)> {
        m.body.iter().map(|e| (e.kind, e.target.as_str())).collect()
    }

    const OVERLOAD: &str = include_str!("../../fixtures/Overload.java");
    const MY_EXCEPTION: &str = include_str!("../../fixtures/MyException.java");

    #[test]
    fn overload_listing_model() {
        let u = unit(OVERLOAD);
        let c = u.class("Overload").unwrap();
        let fields: Vec<_> = c.fields.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(fields, ["a", "b"]);
        let sigs: Vec<_> = c.methods.iter().map(MethodDecl::signature).collect();
        assert_eq!(sigs, ["test(int)", "test(int,int)"]);
        assert!(u.class("MethodOverloading").unwrap().is_driver());
        assert!(!c.is_driver());
    }

    #[test]
    fn empty_class() {
        let u = unit("class Empty {}");
        let c = &u.classes[0];
        assert_eq!(c.name, "Empty");
        assert!(c.fields.is_empty() && c.methods.is_empty());
    }

    #[test]
    fn try_block_events() {
        let u = unit(MY_EXCEPTION);
        let main = &u.class("MyException").unwrap().methods[0];
        assert_eq!(main.try_blocks.len(), 1);
        let t = &main.try_blocks[0];
        assert_eq!(t.id, "try1");
        assert_eq!(t.exception_type(), "ArithmeticException");
        let field_events: Vec<_> = t
            .body_events(main)
            .iter()
            .chain(t.handler_events(main))
            .filter(|e| e.is_field_access() && e.target != "System")
            .map(|e| (e.kind, e.target.as_str()))
            .collect();
        assert_eq!(
            field_events,
            [(EventKind::FieldWrite, "d"), (EventKind::FieldWrite, "a"), (EventKind::FieldRead, "d")]
        );
        assert!(t.body.end <= t.handlers.start);
    }

    #[test]
    fn assignment_forms() {
        let u = unit(
            "class A { int x; int[] arr;
               void m(int p) { int loc = p; x = p; this.x += 1; x++; --x; arr[0] = x; loc = x; p = 2; } }",
        );
        let m = &u.classes[0].methods[0];
        assert_eq!(
            events(m),
            [
                (EventKind::LocalOp, "loc"),
                (EventKind::ParamRead, "p"),
                (EventKind::FieldWrite, "x"),
                (EventKind::ParamRead, "p"),
                (EventKind::FieldWrite, "x"),
                (EventKind::FieldWrite, "x"),
                (EventKind::FieldWrite, "x"),
                (EventKind::FieldWrite, "arr"),
                (EventKind::FieldRead, "x"),
                (EventKind::LocalOp, "loc"),
                (EventKind::FieldRead, "x"),
                (EventKind::LocalOp, "p"),
            ]
        );
    }

    #[test]
    fn calls_and_receivers() {
        let u = unit(
            "class A { int f; A(int v) { this(v, 1); } A(int v, int w) { super(); }
               void m(A other) { g(1, \"s\"); this.g(2, other.f + 1); other.g(3, null); new A(4); } void g(int a, String b) {} }",
        );
        let m = u.classes[0].methods.iter().find(|m| m.name == "m").unwrap();
        assert_eq!(
            events(m),
            [
                (EventKind::SelfCall, "g"),
                (EventKind::SelfCall, "g"),
                (EventKind::ParamRead, "other"),
                (EventKind::ParamRead, "other"),
                (EventKind::LocalOp, "other.g"),
                (EventKind::CtorCall, "A"),
            ]
        );
        assert_eq!(m.body[0].arg_types, [Some("int".to_string()), Some("String".to_string())]);
        let ctor = &u.classes[0].methods[0];
        assert!(ctor.is_constructor);
        assert_eq!(events(ctor), [(EventKind::CtorCall, "A"), (EventKind::ParamRead, "v")]);
        let ctor2 = &u.classes[0].methods[1];
        assert_eq!(ctor2.body[0].receiver, Receiver::Super);
        assert_eq!(ctor.body[0].receiver, Receiver::This);
    }

    #[test]
    fn accessor_shapes() {
        let u = unit(
            "class A { int x; int getX() { return x; } void setX(int v) { this.x = v; }
               int twice() { return x + x; } void setLocal(int v) { int t = v; } }",
        );
        let shapes: Vec<_> = u.classes[0].methods.iter().map(|m| m.shape.clone()).collect();
        assert_eq!(
            shapes,
            [
                BodyShape::ReturnsName("x".into()),
                BodyShape::AssignsParam { field: "x".into(), param: "v".into() },
                BodyShape::Other,
                BodyShape::Other,
            ]
        );
    }

    #[test]
    fn control_flow_is_recursed() {
        let u = unit(
            "class A { int n; int s;
               void m() { for (int i = 0; i < n; i++) { if (i > s) s = i; else { s--; } } while (n > 0) n--; } }",
        );
        let m = &u.classes[0].methods[0];
        let fields: Vec<_> =
            m.body.iter().filter(|e| e.is_field_access()).map(|e| (e.kind, e.target.as_str())).collect();
        assert_eq!(
            fields,
            [
                (EventKind::FieldRead, "n"),
                (EventKind::FieldRead, "s"),
                (EventKind::FieldWrite, "s"),
                (EventKind::FieldWrite, "s"),
                (EventKind::FieldRead, "n"),
                (EventKind::FieldWrite, "n"),
            ]
        );
    }

    #[test]
    fn unparseable_statement_degrades() {
        let u = unit("class A { int x; void m() { switch (q) { case 1: break; } x = 2; } }");
        let m = &u.classes[0].methods[0];
        assert_eq!(events(m).last(), Some(&(EventKind::FieldWrite, "x")));
        let u = unit("class A { void m() { switch (1) { default: } } }");
        assert_eq!(events(&u.classes[0].methods[0]), [(EventKind::LocalOp, "<unparsed>")]);
    }

    #[test]
    fn prototype_declarations() {
        let u = unit("class Poly { Poly(int, int); double eval(double); void add(Poly); }");
        let sigs: Vec<_> = u.classes[0].methods.iter().map(MethodDecl::signature).collect();
        assert_eq!(sigs, ["Poly(int,int)", "eval(double)", "add(Poly)"]);
        assert!(u.classes[0].methods.iter().all(|m| m.is_abstract));
    }

    #[test]
    fn declaration_errors() {
        assert!(matches!(parse_source("t", "class { }"), Err(FrontendError::Parse { .. })));
        assert!(matches!(parse_source("t", "class A { void f() { "), Err(FrontendError::Parse { .. })));
        assert!(matches!(parse_source("t", "class A { int x; "), Err(FrontendError::Parse { .. })));
        assert!(matches!(
            parse_source("t", "class A { void f(int a) {} void f(int b) {} }"),
            Err(FrontendError::DuplicateMember { .. })
        ));
        assert!(matches!(parse_source("t", "class A { int x; int x; }"), Err(FrontendError::DuplicateMember { .. })));
        assert!(matches!(parse_source("t", "class A {} class A {}"), Err(FrontendError::DuplicateClass { .. })));
        assert!(matches!(parse_source("t", "class A { foo() {} }"), Err(FrontendError::Parse { .. })));
    }

    #[test]
    fn spans_nest() {
        for src in [OVERLOAD, MY_EXCEPTION, include_str!("../../fixtures/Binomial.java")] {
            let u = unit(src);
            for c in &u.classes {
                assert!(c.span.end <= src.len());
                for m in &c.methods {
                    assert!(c.span.contains(&m.span), "{} in {}", m.name, c.name);
                    for e in &m.body {
                        assert!(m.span.contains(&e.span), "{e:?} in {}", m.name);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_is_deterministic() {
        assert_eq!(unit(OVERLOAD), unit(OVERLOAD));
    }
}
