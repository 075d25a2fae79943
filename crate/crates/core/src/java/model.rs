use std::ops::Range;

use serde::Serialize;

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn to(&self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// One parsed file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: String,
    pub text: String,
    pub classes: Vec<ClassModel>,
}

impl SourceUnit {
    pub fn class(&self, name: &str) -> Option<&ClassModel> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// 1-based line and column of a byte offset.
    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        line_col(&self.text, offset)
    }
}

pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassModel {
    pub name: String,
    pub superclass: Option<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub is_abstract: bool,
    pub span: Span,
}

impl ClassModel {
    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn constructors(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| m.is_constructor)
    }

    pub fn plain_methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| !m.is_constructor)
    }

    /// A class with no fields whose only method is `main`.
    pub fn is_driver(&self) -> bool {
        self.fields.is_empty()
            && self.methods.len() == 1
            && self.methods[0].name == "main"
            && !self.methods[0].is_constructor
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub declared_type: String,
    pub is_static: bool,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub return_type: Option<String>,
    pub is_constructor: bool,
    pub is_static: bool,
    /// Declared without a body (`abstract` or a bare prototype).
    pub is_abstract: bool,
    pub body: Vec<Event>,
    pub try_blocks: Vec<TryBlock>,
    pub shape: BodyShape,
    pub span: Span,
}

impl MethodDecl {
    /// `name(type,type)` with parameter names erased.
    pub fn signature(&self) -> String {
        signature(&self.name, self.params.iter().map(|p| p.ty.as_str()))
    }

    pub fn param_types(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.ty.as_str()).collect()
    }

    /// Index of the innermost try block whose body or handlers contain event `idx`.
    pub fn owning_try(&self, idx: usize) -> Option<usize> {
        self.try_blocks
            .iter()
            .enumerate()
            .filter(|(_, t)| t.body.contains(&idx) || t.handlers.contains(&idx))
            .min_by_key(|(_, t)| t.body.len() + t.handlers.len())
            .map(|(i, _)| i)
    }
}

pub fn signature<'a>(name: &str, types: impl IntoIterator<Item = &'a str>) -> String {
    let types: Vec<&str> = types.into_iter().collect();
    format!("{}({})", name, types.join(","))
}

/// The single-statement forms accessor detection looks at.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BodyShape {
    #[default]
    Other,
    /// `return f;` or `return this.f;`
    ReturnsName(String),
    /// `f = p;` or `this.f = p;` with `p` a parameter.
    AssignsParam { field: String, param: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EventKind {
    FieldRead,
    FieldWrite,
    SelfCall,
    CtorCall,
    ParamRead,
    LocalOp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    /// Field name, method name, class name (for constructor calls) or a free-form label.
    pub target: String,
    pub span: Span,
    /// Statically known argument types for calls; `None` where unknown.
    pub arg_types: Vec<Option<String>>,
    pub receiver: Receiver,
}

/// How a member was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Receiver {
    /// Bare name, `this.x`, or `new T(...)` for constructor calls.
    #[default]
    Implicit,
    /// `this(...)` constructor chaining.
    This,
    /// `super.x`, `super.m()` or `super(...)`; lookup starts at the parent class.
    Super,
}

impl Event {
    pub fn new(kind: EventKind, target: impl Into<String>, span: Span) -> Self {
        Event { kind, target: target.into(), span, arg_types: Vec::new(), receiver: Receiver::Implicit }
    }

    pub fn is_field_access(&self) -> bool {
        matches!(self.kind, EventKind::FieldRead | EventKind::FieldWrite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TryBlock {
    /// `try1`, `try2`, ... in order of appearance within the method.
    pub id: String,
    /// Index range of the `try` body's events in the method body.
    pub body: Range<usize>,
    /// Index range of all `catch` handlers' events.
    pub handlers: Range<usize>,
    pub exception_types: Vec<String>,
    pub span: Span,
}

impl TryBlock {
    pub fn body_events<'m>(&self, method: &'m MethodDecl) -> &'m [Event] {
        &method.body[self.body.clone()]
    }

    pub fn handler_events<'m>(&self, method: &'m MethodDecl) -> &'m [Event] {
        &method.body[self.handlers.clone()]
    }

    pub fn exception_type(&self) -> &str {
        self.exception_types.first().map_or("", String::as_str)
    }
}
