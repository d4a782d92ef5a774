def parse(line):
    op, val = line.split()
    return op, int(val)

balance = 0
for _ in range(int(input())):
    op, val = parse(input())
    if op == "dep":
        balance += val
    elif op == "wd":
        if val > balance:
            raise SystemExit("overdraft")
        balance -= val
print(balance)
