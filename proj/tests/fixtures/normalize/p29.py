def make_adder(step):
    def add(v):
        nonlocal step
        step += 1
        return v + step
    return add

f = make_adder(int(input()))
print(f(1), f(1))
