class Stack:
    def __init__(self):
        self.items = []

    def push(self, v):
        self.items.append(v)

    def pop(self):
        return self.items.pop()

st = Stack()
for tok in input().split():
    if tok == "+":
        b = st.pop(); a = st.pop()
        st.push(a + b)
    else:
        st.push(int(tok))
print(st.pop())
