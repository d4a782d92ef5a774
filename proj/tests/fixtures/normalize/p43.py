def fact(v):
    return 1 if v <= 1 else v * fact(v - 1)

def choose(a, b):
    return fact(a) // (fact(b) * fact(a - b))

x, y = map(int, input().split())
print(choose(x, y))
